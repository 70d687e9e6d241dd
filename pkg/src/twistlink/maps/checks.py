"""Batch lemma checks over rows of rotations, for enumeration campaigns.

Each function returns one verdict per row.  The single-graph checkers in
``lemmas`` are written separately in plain Python; tests compare the two.
"""

import numpy as np
from numba import njit

from .kernels import double_along, face_ids, vertex_ids


@njit(cache=True)
def sphere_rows(rows):
    """At least three vertices of valence below 6."""
    out = np.empty(rows.shape[0], np.bool_)
    for i in range(rows.shape[0]):
        _, vdeg = vertex_ids(rows[i])
        out[i] = (vdeg < 6).sum() >= 3
    return out


@njit(cache=True)
def _boundary_mask(rho, outer, vid, nv):
    bdy = np.zeros(nv, np.bool_)
    for d in range(rho.shape[0]):
        if outer[d]:
            bdy[vid[d]] = True
    return bdy


@njit(cache=True)
def disk_rows(rows, outer):
    """An interior vertex of valence at most 5, or three boundary vertices
    of valence at most 3."""
    out = np.empty(rows.shape[0], np.bool_)
    for i in range(rows.shape[0]):
        vid, vdeg = vertex_ids(rows[i])
        bdy = _boundary_mask(rows[i], outer, vid, vdeg.shape[0])
        inner_small = False
        low_bdy = 0
        for v in range(vdeg.shape[0]):
            if bdy[v]:
                if vdeg[v] <= 3:
                    low_bdy += 1
            elif vdeg[v] <= 5:
                inner_small = True
        out[i] = inner_small or low_bdy >= 3
    return out


@njit(cache=True)
def doubled_disk_rows(rows, outer):
    """The disk verdict read off the doubled sphere graph.

    Returns (verdict, sane): ``sane`` records that the double is a planar
    graph without monogons or bigons, as the doubling argument needs.
    """
    m = rows.shape[0]
    verdict = np.empty(m, np.bool_)
    sane = np.empty(m, np.bool_)
    ne = rows.shape[1] // 2
    glue = np.zeros(ne, np.bool_)
    for d in range(rows.shape[1]):
        if outer[d]:
            glue[d // 2] = True
    for i in range(m):
        big, origin, _ = double_along(rows[i], outer, glue)
        vid, vdeg = vertex_ids(big)
        fid, fdeg = face_ids(big)
        nv = vdeg.shape[0]
        e2 = big.shape[0] // 2
        sane[i] = nv - e2 + fdeg.shape[0] == 2 and fdeg.min() >= 3
        seam = np.zeros(nv, np.bool_)
        for d in range(big.shape[0]):
            if glue[origin[d] // 2]:
                seam[vid[d]] = True
        small_off = False
        small_on = 0
        for v in range(nv):
            if vdeg[v] < 6:
                if seam[v]:
                    small_on += 1
                else:
                    small_off = True
        verdict[i] = small_off or small_on >= 3
    return verdict, sane


@njit(cache=True)
def torus_rows(rows):
    """Some vertex of valence at most 6."""
    out = np.empty(rows.shape[0], np.bool_)
    for i in range(rows.shape[0]):
        _, vdeg = vertex_ids(rows[i])
        out[i] = vdeg.min() <= 6
    return out


@njit(cache=True)
def longest_bigon_family(rho, outer):
    """Number of bigons in the largest edge-sharing chain of inner bigons."""
    fid, fdeg = face_ids(rho)
    nf = fdeg.shape[0]
    n = rho.shape[0]
    is_bigon = np.zeros(nf, np.bool_)
    first = np.full(nf, -1, np.int64)
    for d in range(n):
        f = fid[d]
        if first[f] < 0:
            first[f] = d
    for f in range(nf):
        d = first[f]
        if fdeg[f] == 2 and not outer[d]:
            d2 = rho[d ^ 1]
            if d // 2 != d2 // 2:
                is_bigon[f] = True
    parent = np.arange(nf)
    for e in range(n // 2):
        a, b = fid[2 * e], fid[2 * e + 1]
        if a != b and is_bigon[a] and is_bigon[b]:
            while parent[a] != a:
                a = parent[a]
            while parent[b] != b:
                b = parent[b]
            if a != b:
                parent[a] = b
    size = np.zeros(nf, np.int64)
    best = 0
    for f in range(nf):
        if is_bigon[f]:
            r = f
            while parent[r] != r:
                r = parent[r]
            size[r] += 1
            if size[r] > best:
                best = size[r]
    return best


@njit(cache=True)
def bigon_rows(rows, outer, rtw):
    """Longest bigon family exceeds rtw/6 - 1, i.e. 6 * length > rtw - 6.
    Also returns the family lengths."""
    m = rows.shape[0]
    ok = np.empty(m, np.bool_)
    lengths = np.empty(m, np.int64)
    for i in range(m):
        k = longest_bigon_family(rows[i], outer)
        lengths[i] = k
        ok[i] = 6 * k > rtw - 6
    return ok, lengths
