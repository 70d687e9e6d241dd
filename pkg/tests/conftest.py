import json
from importlib import resources

import pytest

from twistlink.diagram import parse_pd

TREFOIL = "X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]"
FIG8 = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"
HOPF = "X[4,1,3,2] X[2,3,1,4]"
K5_2 = "X[1,5,2,4] X[3,9,4,8] X[5,1,6,10] X[7,3,8,2] X[9,7,10,6]"

# frozen negative examples (prime but not twist reduced, composite, non-alternating)
P1313 = "X[8,11,1,12] X[14,7,15,8] X[6,13,7,14] X[12,5,13,6] X[4,15,5,16] X[10,3,11,4] X[2,9,3,10] X[16,1,9,2]"
P1213 = "X[14,11,1,12] X[6,13,7,14] X[12,5,13,6] X[4,7,5,8] X[10,3,11,4] X[2,9,3,10] X[8,1,9,2]"
GRANNY = "X[2,5,3,6] X[6,3,7,4] X[4,7,5,8] X[8,11,9,12] X[12,9,1,10] X[10,1,11,2]"
K8_19 = "X[16,6,1,5] X[6,2,7,1] X[11,3,12,2] X[3,15,4,14] X[4,10,5,9] X[12,8,13,7] X[8,14,9,13] X[15,11,16,10]"


def load_corpus():
    text = resources.files("twistlink").joinpath("data/corpus.jsonl").read_text()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


CORPUS = load_corpus()


@pytest.fixture(scope="session")
def corpus():
    return [(r["name"], parse_pd(r["pd"])) for r in CORPUS]
