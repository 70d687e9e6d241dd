"""Brute-force map enumeration for cross-checking the generator.

Every permutation of the darts is tried as a rotation, and the survivors
are grouped by a direct isomorphism search (no canonical codes).
"""

import itertools


def orbits(perm):
    seen, out = set(), []
    for s in range(len(perm)):
        if s in seen:
            continue
        orb, x = [], s
        while x not in seen:
            seen.add(x)
            orb.append(x)
            x = perm[x]
        out.append(orb)
    return out


def faces(rho):
    return orbits([rho[d ^ 1] for d in range(len(rho))])


def connected(rho):
    n = len(rho)
    if n == 0:
        return True
    seen, todo = {0}, [0]
    while todo:
        d = todo.pop()
        for x in (rho[d], d ^ 1):
            if x not in seen:
                seen.add(x)
                todo.append(x)
    return len(seen) == n


def genus(rho):
    v, e, f = len(orbits(rho)), len(rho) // 2, len(faces(rho))
    return (2 - v + e - f) // 2


def _try(r1, r2, start, m1=None, m2=None):
    n = len(r1)
    phi = {0: start}
    todo = [0]
    while todo:
        d = todo.pop()
        for a, b in ((r1[d], r2[phi[d]]), (d ^ 1, phi[d] ^ 1)):
            if a in phi:
                if phi[a] != b:
                    return False
            else:
                phi[a] = b
                todo.append(a)
    if len(set(phi.values())) != n:
        return False
    if m1 is not None:
        return all(m1[d] == m2[phi[d]] for d in range(n))
    return True


def isomorphic(r1, r2, mirror, m1=None, m2=None):
    if len(r1) != len(r2):
        return False
    if not r1:
        return True
    cands = [list(r2)]
    marks2 = [m2]
    if mirror:
        inv = [0] * len(r2)
        for i, x in enumerate(r2):
            inv[x] = i
        cands.append(inv)
        # the mirror moves outer-face marks from d to d ^ 1
        marks2.append(None if m2 is None else [m2[d ^ 1] for d in range(len(r2))])
    for r, mk in zip(cands, marks2):
        for s in range(len(r)):
            if _try(r1, r, s, m1, mk):
                return True
    return False


def brute_maps(edges, accept, mirror=True):
    """Isomorphism classes of connected maps with the given edge count that
    satisfy ``accept(rho)``."""
    reps = []
    for rho in itertools.permutations(range(2 * edges)):
        if not connected(rho) or not accept(rho):
            continue
        if not any(isomorphic(rho, r, mirror) for r in reps):
            reps.append(rho)
    return reps
