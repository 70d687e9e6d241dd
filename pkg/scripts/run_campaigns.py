"""Run the exhaustive lemma campaigns and record them under results/.

Each campaign goes through the command line front end, so the report in
results/<name>.json is exactly what ``twistlink lemmas verify`` prints and
results/ledger.ndjson gets one run record per campaign.

    python3 scripts/run_campaigns.py            # all campaigns
    python3 scripts/run_campaigns.py disk-12    # one of them
    TWISTLINK_WORKERS=4 python3 scripts/run_campaigns.py
"""

import argparse
import json
import os
import pathlib
import sys

from twistlink.cli import main as cli

RESULTS = pathlib.Path(__file__).resolve().parents[1] / "results"

CAMPAIGNS = {
    "sphere-12": ["--lemma", "sphere", "--max-edges", "12"],
    "disk-12": ["--lemma", "disk", "--max-edges", "12"],
    "torus-10": ["--lemma", "torus", "--max-edges", "10"],
    "bigon-6-12": ["--lemma", "bigon-bound", "--max-edges", "12", "--rtw", "6"],
    "bigon-12-12": ["--lemma", "bigon-bound", "--max-edges", "12", "--rtw", "12"],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", help=", ".join(CAMPAIGNS))
    args = ap.parse_args()
    unknown = set(args.names) - set(CAMPAIGNS)
    if unknown:
        ap.error(f"unknown campaign(s): {', '.join(sorted(unknown))}")
    RESULTS.mkdir(exist_ok=True)
    workers = os.environ.get("TWISTLINK_WORKERS", "1")
    for name in args.names or CAMPAIGNS:
        out = RESULTS / f"{name}.json"
        code = cli(["lemmas", "verify", *CAMPAIGNS[name], "--workers", workers,
                    "--json", str(out), "--ledger", str(RESULTS / "ledger.ndjson")])
        rep = json.loads(out.read_text())
        print(f"{name}: exit {code}, {rep['instances_checked']} graphs, "
              f"{rep['n_counterexamples']} counterexamples, {rep['runtime']} s", flush=True)
        if code == 2:
            sys.exit(2)


if __name__ == "__main__":
    main()
