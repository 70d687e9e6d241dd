"""Numba kernels on rotation systems stored as dart arrays.

A map with E edges has darts 0..2E-1.  Darts d and d^1 are the two ends
of one edge and ``rho[d]`` is the next dart counterclockwise around the
vertex of d.  Faces are the orbits of ``d -> rho[d ^ 1]``; the corner
between ``inverse(rho)[d]`` and d belongs to the face of d.

Mirror images use ``inverse(rho)``; the face of d in the mirror is the
face of ``d ^ 1`` in the original.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def inverse(rho):
    inv = np.empty_like(rho)
    for i in range(rho.shape[0]):
        inv[rho[i]] = i
    return inv


@njit(cache=True)
def vertex_ids(rho):
    n = rho.shape[0]
    vid = np.full(n, -1, np.int64)
    vdeg = np.zeros(n + 1, np.int64)
    nv = 0
    for d in range(n):
        if vid[d] < 0:
            x, k = d, 0
            while vid[x] < 0:
                vid[x] = nv
                k += 1
                x = rho[x]
            vdeg[nv] = k
            nv += 1
    return vid, vdeg[:nv]


@njit(cache=True)
def face_ids(rho):
    n = rho.shape[0]
    fid = np.full(n, -1, np.int64)
    fdeg = np.zeros(n + 1, np.int64)
    nf = 0
    for d in range(n):
        if fid[d] < 0:
            x, k = d, 0
            while fid[x] < 0:
                fid[x] = nf
                k += 1
                x = rho[x ^ 1]
            fdeg[nf] = k
            nf += 1
    return fid, fdeg[:nf]


@njit(cache=True)
def is_connected(rho):
    n = rho.shape[0]
    if n == 0:
        return True
    seen = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    stack[0] = 0
    seen[0] = True
    top, count = 1, 1
    while top > 0:
        top -= 1
        d = stack[top]
        for x in (rho[d], d ^ 1):
            if not seen[x]:
                seen[x] = True
                count += 1
                stack[top] = x
                top += 1
    return count == n


@njit(cache=True)
def euler_genus(rho):
    """(2 - V + E - F) / 2 for a connected map; doubled when odd."""
    n = rho.shape[0]
    if n == 0:
        return 0
    _, vdeg = vertex_ids(rho)
    _, fdeg = face_ids(rho)
    return (2 - vdeg.shape[0] + n // 2 - fdeg.shape[0]) // 2


# --- elementary operations --------------------------------------------


@njit(cache=True)
def add_leaf(rho, d):
    """New pendant edge in the corner before d; the leaf end is the last dart."""
    n = rho.shape[0]
    out = np.empty(n + 2, np.int64)
    out[:n] = rho
    p = inverse(rho)[d]
    out[p] = n
    out[n] = d
    out[n + 1] = n + 1
    return out


@njit(cache=True)
def add_chord(rho, d1, d2):
    """New edge from the corner before d1 to the corner before d2.

    When d1 == d2 the edge is a loop placed in that corner.
    """
    n = rho.shape[0]
    out = np.empty(n + 2, np.int64)
    out[:n] = rho
    inv = inverse(rho)
    if d1 == d2:
        p = inv[d1]
        out[p] = n
        out[n] = n + 1
        out[n + 1] = d1
        return out
    p1, p2 = inv[d1], inv[d2]
    out[p1] = n
    out[n] = d1
    out[p2] = n + 1
    out[n + 1] = d2
    return out


@njit(cache=True)
def delete_edge(rho, e):
    """Remove edge e and renumber the later edges down by one."""
    n = rho.shape[0]
    a = 2 * e
    tmp = rho.copy()
    for x in (a, a + 1):
        nx = tmp[x]
        if nx == x:
            continue
        p = x
        while tmp[p] != x:
            p = tmp[p]
        tmp[p] = nx
        tmp[x] = x
    out = np.empty(n - 2, np.int64)
    for d in range(n):
        if d == a or d == a + 1:
            continue
        t = tmp[d]
        out[d - 2 if d > a else d] = t - 2 if t > a else t
    return out


@njit(cache=True)
def subdivide(rho, e):
    """Put a new vertex of degree 2 in the middle of edge e."""
    n = rho.shape[0]
    b = 2 * e + 1
    out = np.empty(n + 2, np.int64)
    out[:n] = rho
    if rho[b] == b:
        out[n + 1] = n + 1
    else:
        p = inverse(rho)[b]
        out[p] = n + 1
        out[n + 1] = rho[b]
    out[b] = n
    out[n] = b
    return out


# --- canonical form ----------------------------------------------------


@njit(cache=True)
def _code(rho_o, root, best, state, lab, order, code):
    """BFS labelling from root.  Compares on the fly against ``best`` when
    ``state`` is 0 and bails out with 1 as soon as the code is larger.
    Returns -1 if strictly smaller, 0 if equal."""
    n = rho_o.shape[0]
    for i in range(n):
        lab[i] = -1
    lab[root] = 0
    order[0] = root
    nl = 1
    for i in range(n):
        d = order[i]
        s = d ^ 1
        if lab[s] < 0:
            lab[s] = nl
            order[nl] = s
            nl += 1
        r = rho_o[d]
        if lab[r] < 0:
            lab[r] = nl
            order[nl] = r
            nl += 1
        a = lab[s]
        b = lab[r]
        code[2 * i] = a
        code[2 * i + 1] = b
        if state == 0:
            if a < best[2 * i]:
                state = -1
            elif a > best[2 * i]:
                return 1
            elif b < best[2 * i + 1]:
                state = -1
            elif b > best[2 * i + 1]:
                return 1
    return state


@njit(cache=True)
def _root_keys(rho, vid, vdeg, fid, fdeg, mirror, outer, use_outer):
    n = rho.shape[0]
    base = n + 1
    keys = np.full(2 * n, -1, np.int64)
    for o in range(2 if mirror else 1):
        for d in range(n):
            if use_outer:
                if o == 0 and not outer[d]:
                    continue
                if o == 1 and not outer[d ^ 1]:
                    continue
            f_here = fdeg[fid[d]] if o == 0 else fdeg[fid[d ^ 1]]
            f_there = fdeg[fid[d ^ 1]] if o == 0 else fdeg[fid[d]]
            keys[o * n + d] = ((vdeg[vid[d]] * base + f_here) * base + vdeg[vid[d ^ 1]]) * base + f_there
    return keys


@njit(cache=True)
def canon(rho, mirror, outer, use_outer):
    """Least BFS code over admissible roots (and mirror images when
    ``mirror``).  Returns the code and the optimal roots as o*n + d."""
    vid, vdeg = vertex_ids(rho)
    fid, fdeg = face_ids(rho)
    return _canon(rho, mirror, outer, use_outer, vid, vdeg, fid, fdeg)


@njit(cache=True)
def _canon(rho, mirror, outer, use_outer, vid, vdeg, fid, fdeg):
    n = rho.shape[0]
    keys = _root_keys(rho, vid, vdeg, fid, fdeg, mirror, outer, use_outer)
    kmax = keys.max()
    inv = inverse(rho)
    best = np.empty(2 * n, np.int64)
    code = np.empty(2 * n, np.int64)
    lab = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    opt = np.empty(2 * n, np.int64)
    nopt = 0
    have = False
    for r in range(2 * n):
        if keys[r] != kmax:
            continue
        rho_o = rho if r < n else inv
        st = _code(rho_o, r % n, best, 0 if have else -1, lab, order, code)
        if st < 0:
            best[:] = code
            have = True
            nopt = 0
            opt[0] = r
            nopt = 1
        elif st == 0:
            opt[nopt] = r
            nopt += 1
    return best, opt[:nopt]


@njit(cache=True)
def labels_from(rho, r):
    n = rho.shape[0]
    rho_o = rho if r < n else inverse(rho)
    lab = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    code = np.empty(2 * n, np.int64)
    _code(rho_o, r % n, code, -1, lab, order, code)
    return lab


# --- canonical construction path --------------------------------------


@njit(cache=True)
def deletion_candidates(rho, outer, use_outer, mindeg, genus_drop):
    """Edges whose removal is the inverse of one generation step.

    Rule 1: edges between two different faces (never boundary edges).
    Rule 2, only if rule 1 is empty: pendant edges whose face stays large
    enough.  Rule 3, only if both are empty and ``genus_drop``: edges whose
    removal lowers the genus to 0 leaving every face large enough.
    Returns (edges, rule); rule 0 marks a base map.
    """
    vid, vdeg = vertex_ids(rho)
    fid, fdeg = face_ids(rho)
    return _deletion_candidates(rho, outer, use_outer, mindeg, genus_drop, vid, vdeg, fid, fdeg)


@njit(cache=True)
def _deletion_candidates(rho, outer, use_outer, mindeg, genus_drop, vid, vdeg, fid, fdeg):
    n = rho.shape[0]
    ne = n // 2
    out = np.empty(ne, np.int64)
    k = 0
    if ne < 2:
        return out[:0], 0
    for e in range(ne):
        a = 2 * e
        if fid[a] != fid[a + 1]:
            if use_outer and (outer[a] or outer[a + 1]):
                continue
            out[k] = e
            k += 1
    if k > 0:
        return out[:k], 1
    for e in range(ne):
        a = 2 * e
        if vdeg[vid[a]] == 1 or vdeg[vid[a + 1]] == 1:
            if use_outer and outer[a]:
                continue
            if fdeg[fid[a]] - 2 >= mindeg:
                out[k] = e
                k += 1
    if k > 0:
        return out[:k], 2
    if genus_drop:
        for e in range(ne):
            a = 2 * e
            if vdeg[vid[a]] == 1 or vdeg[vid[a + 1]] == 1:
                continue
            sub = delete_edge(rho, e)
            if not is_connected(sub):
                continue
            sf, sdeg = face_ids(sub)
            if sdeg.shape[0] != 2 or sdeg.min() < mindeg:
                continue
            out[k] = e
            k += 1
        if k > 0:
            return out[:k], 3
    return out[:0], 0


@njit(cache=True)
def _edge_key(rho, e, vid, vdeg, fid, fdeg):
    a = 2 * e
    return _key4(vdeg[vid[a]], vdeg[vid[a + 1]], fdeg[fid[a]], fdeg[fid[a + 1]], rho.shape[0] + 1)


@njit(cache=True)
def _key4(v1, v2, f1, f2, base):
    if v1 > v2:
        v1, v2 = v2, v1
    if f1 > f2:
        f1, f2 = f2, f1
    return ((v1 * base + v2) * base + f1) * base + f2


@njit(cache=True)
def accept(child, new_e, outer, use_outer, mirror, mindeg, genus_drop):
    """Is ``new_e`` the canonical last edge of ``child``?  Also returns the
    canonical code so siblings can be deduplicated."""
    vid, vdeg = vertex_ids(child)
    fid, fdeg = face_ids(child)
    return _accept(child, new_e, outer, use_outer, mirror, mindeg, genus_drop, vid, vdeg, fid, fdeg)


@njit(cache=True)
def _accept(child, new_e, outer, use_outer, mirror, mindeg, genus_drop, vid, vdeg, fid, fdeg):
    cands, rule = _deletion_candidates(child, outer, use_outer, mindeg, genus_drop, vid, vdeg, fid, fdeg)
    empty = np.empty(0, np.int64)
    if rule == 0:
        return False, empty
    found = False
    kmax = -1
    knew = -1
    for e in cands:
        key = _edge_key(child, e, vid, vdeg, fid, fdeg)
        if key > kmax:
            kmax = key
        if e == new_e:
            found = True
            knew = key
    if not found or knew < kmax:
        return False, empty
    best, opt = _canon(child, mirror, outer, use_outer, vid, vdeg, fid, fdeg)
    for r in opt:
        lab = labels_from(child, r)
        pick, low = -1, child.shape[0] + 1
        for e in cands:
            if _edge_key(child, e, vid, vdeg, fid, fdeg) != kmax:
                continue
            m = min(lab[2 * e], lab[2 * e + 1])
            if m < low:
                low, pick = m, e
        if pick == new_e:
            return True, best
    return False, best


@njit(cache=True)
def _admissible(child, outer, use_outer, mindeg, gmax, vdeg, fid, fdeg):
    n = child.shape[0]
    for d in range(n):
        if use_outer and outer[d]:
            continue
        if fdeg[fid[d]] < mindeg:
            return False
    g2 = 2 - vdeg.shape[0] + n // 2 - fdeg.shape[0]
    return g2 <= 2 * gmax


@njit(cache=True)
def _deficit_bound(child, outer, thr_int, thr_bdy, max_exc, vid, vdeg):
    """Edges still needed before all but ``max_exc`` vertices meet their
    valence thresholds (each new edge adds 2 to the degree sum)."""
    nv = vdeg.shape[0]
    bdy = np.zeros(nv, np.bool_)
    for d in range(child.shape[0]):
        if outer[d]:
            bdy[vid[d]] = True
    defs = np.empty(nv, np.int64)
    for v in range(nv):
        t = thr_bdy if bdy[v] else thr_int
        defs[v] = max(0, t - vdeg[v])
    defs.sort()
    total = 0
    for v in range(nv - max_exc):
        total += defs[v]
    return (total + 1) // 2


@njit(cache=True)
def expand(rho, outer, use_outer, mirror, mindeg, gmax, thr_int, thr_bdy, max_exc, max_edges):
    """All canonical children of one map, deduplicated among siblings.

    Generation steps: a pendant edge in any corner, a chord between two
    corners of one face, and (only from genus 0 when ``gmax`` >= 1) a
    chord between corners of two different faces.  Faces marked outer are
    never touched.  ``thr_int > 0`` turns on the valence-deficit prune.
    """
    n = rho.shape[0]
    fid, fdeg = face_ids(rho)
    nf = fdeg.shape[0]
    # face walks
    start = np.zeros(nf + 1, np.int64)
    for f in range(nf):
        start[f + 1] = start[f] + fdeg[f]
    walk = np.empty(n, np.int64)
    seen = np.zeros(nf, np.bool_)
    for d in range(n):
        f = fid[d]
        if seen[f]:
            continue
        seen[f] = True
        x, i = d, start[f]
        while True:
            walk[i] = x
            i += 1
            x = rho[x ^ 1]
            if x == d:
                break
    vid, vdeg = vertex_ids(rho)
    genus0 = (2 - vdeg.shape[0] + n // 2 - nf) == 0
    # Pre-rejection.  A parent edge between two faces other than f keeps
    # its deletion key or gains in a child that only touches f, so a child
    # whose new edge keys below best[f] is never accepted.  A pendant edge
    # is never a rule 1 candidate, so any rule 1 edge rejects every leaf.
    base = n + 3
    best = np.full(nf, -1, np.int64)
    any1 = False
    for e in range(n // 2):
        a = 2 * e
        f1, f2 = fid[a], fid[a + 1]
        if f1 == f2 or (use_outer and (outer[a] or outer[a + 1])):
            continue
        any1 = True
        key = _key4(vdeg[vid[a]], vdeg[vid[a + 1]], fdeg[f1], fdeg[f2], base)
        for f in range(nf):
            if f != f1 and f != f2 and key > best[f]:
                best[f] = key
    drop = gmax >= 1
    cap = 2 * n * n + 4 * n + 4
    kids = np.empty((cap, n + 2), np.int64)
    codes = np.empty((cap, 2 * (n + 2)), np.int64)
    nk = 0
    child_outer = np.zeros(n + 2, np.bool_)
    child_outer[:n] = outer
    new_e = n // 2
    inv = inverse(rho)
    for f in range(nf):
        if use_outer and outer[walk[start[f]]]:
            continue
        for i in range(start[f], start[f + 1]):
            if not any1:
                child = add_leaf(rho, walk[i])
                nk = _consider(child, new_e, child_outer, use_outer, mirror, mindeg, gmax,
                               drop, thr_int, thr_bdy, max_exc, max_edges, kids, codes, nk)
            u = vid[walk[i]]
            for j in range(i, start[f + 1]):
                # the chord splits the face into degrees j-i+1 and k-(j-i)+1
                # (a loop, j == i, encloses a monogon)
                if j - i + 1 < mindeg or fdeg[f] - (j - i) + 1 < mindeg:
                    continue
                w = vid[walk[j]]
                du = vdeg[u] + (2 if u == w else 1)
                dw = vdeg[w] + (2 if u == w else 1)
                if _key4(du, dw, j - i + 1, fdeg[f] - (j - i) + 1, base) < best[f]:
                    continue
                child = add_chord(rho, walk[i], walk[j])
                nk = _consider(child, new_e, child_outer, use_outer, mirror, mindeg, gmax,
                               drop, thr_int, thr_bdy, max_exc, max_edges, kids, codes, nk)
            if mindeg > 1:
                continue
            # a loop in one corner, with its two ends in the other order
            child = add_chord(rho, walk[i], walk[i])
            p = inv[walk[i]]
            child[p] = n + 1
            child[n + 1] = n
            child[n] = walk[i]
            nk = _consider(child, new_e, child_outer, use_outer, mirror, mindeg, gmax,
                           drop, thr_int, thr_bdy, max_exc, max_edges, kids, codes, nk)
    if drop and genus0 and not use_outer:
        for f in range(nf):
            for g in range(f + 1, nf):
                for i in range(start[f], start[f + 1]):
                    for j in range(start[g], start[g + 1]):
                        child = add_chord(rho, walk[i], walk[j])
                        nk = _consider(child, new_e, child_outer, use_outer, mirror, mindeg, gmax,
                                       drop, thr_int, thr_bdy, max_exc, max_edges, kids, codes, nk)
    return kids[:nk]


@njit(cache=True)
def expand_rows(rows, outer, use_outer, mirror, mindeg, gmax, thr_int, thr_bdy, max_exc, max_edges):
    """``expand`` over every row, children concatenated in row order."""
    parts = []
    total = 0
    for i in range(rows.shape[0]):
        kids = expand(rows[i], outer, use_outer, mirror, mindeg, gmax,
                      thr_int, thr_bdy, max_exc, max_edges)
        parts.append(kids)
        total += kids.shape[0]
    out = np.empty((total, rows.shape[1] + 2), np.int64)
    k = 0
    for kids in parts:
        out[k:k + kids.shape[0]] = kids
        k += kids.shape[0]
    return out


@njit(cache=True)
def _consider(child, new_e, outer, use_outer, mirror, mindeg, gmax, drop,
              thr_int, thr_bdy, max_exc, max_edges, kids, codes, nk):
    fid, fdeg = face_ids(child)
    vid, vdeg = vertex_ids(child)
    if not _admissible(child, outer, use_outer, mindeg, gmax, vdeg, fid, fdeg):
        return nk
    if thr_int > 0 and child.shape[0] // 2 + _deficit_bound(child, outer, thr_int, thr_bdy, max_exc, vid, vdeg) > max_edges:
        return nk
    ok, code = _accept(child, new_e, outer, use_outer, mirror, mindeg, drop, vid, vdeg, fid, fdeg)
    if not ok:
        return nk
    m = code.shape[0]
    for k in range(nk):
        same = True
        for t in range(m):
            if codes[k, t] != code[t]:
                same = False
                break
        if same:
            return nk
    kids[nk, :] = child
    codes[nk, :m] = code
    return nk + 1


# --- doubling ------------------------------------------------------------


@njit(cache=True)
def double_along(rho, outer, glue):
    """Glue the map to its mirror image along the edges flagged in ``glue``.

    ``outer`` marks darts of the boundary-side face(s); every boundary
    vertex must own exactly one such dart.  Glued edges keep their original
    darts; every other edge gets a mirrored copy.  Returns the new rotation
    and, per new dart, the original dart and a copy flag (0 or 1).
    """
    n = rho.shape[0]
    ne = n // 2
    inv = inverse(rho)
    mir = np.full(ne, -1, np.int64)
    nxt = ne
    for e in range(ne):
        if not glue[e]:
            mir[e] = nxt
            nxt += 1
    big = 2 * nxt
    out = np.full(big, -1, np.int64)
    origin = np.empty(big, np.int64)
    copy = np.zeros(big, np.int64)
    for x in range(n):
        out[x] = rho[x]
        origin[x] = x
        if not glue[x // 2]:
            mx = 2 * mir[x // 2] + (x & 1)
            origin[mx] = x
            copy[mx] = 1
            y = inv[x]
            if not glue[y // 2]:
                out[mx] = 2 * mir[y // 2] + (y & 1)
    seq = np.empty(2 * n, np.int64)
    for d_out in range(n):
        if not outer[d_out]:
            continue
        d_in = inv[d_out]
        if not (glue[d_out // 2] or glue[d_in // 2]):
            continue
        k = 0
        x = d_out
        while True:
            seq[k] = x
            k += 1
            if x == d_in:
                break
            x = rho[x]
        x = d_in
        while True:
            if not glue[x // 2]:
                seq[k] = 2 * mir[x // 2] + (x & 1)
                k += 1
            if x == d_out:
                break
            x = inv[x]
        for i in range(k):
            out[seq[i]] = seq[(i + 1) % k]
    return out, origin, copy


@njit(cache=True)
def smooth_vertex(rho, d):
    """Erase the degree-2 vertex holding darts d and rho[d], fusing its two
    edges.  The edge of d survives; the other edge is removed."""
    a = d
    b = rho[d]
    pb = b ^ 1
    if pb == a:
        return rho.copy()
    inv = inverse(rho)
    out = rho.copy()
    # a takes the place of pb at the far end of b's edge
    prev = inv[pb]
    if prev == pb:
        out[a] = a
    else:
        out[prev] = a
        out[a] = rho[pb]
    out[b] = b
    out[pb] = pb
    return delete_edge(out, b // 2)


# --- batch filters -----------------------------------------------------


@njit(cache=True)
def genus_rows(rows):
    out = np.empty(rows.shape[0], np.int64)
    for i in range(rows.shape[0]):
        out[i] = euler_genus(rows[i])
    return out


@njit(cache=True)
def schedule_rows(rows, outer, t_int, t_bdy, exceptions):
    """Rows whose vertices meet the valence schedule with at most
    ``exceptions`` failures."""
    out = np.empty(rows.shape[0], np.bool_)
    for i in range(rows.shape[0]):
        vid, vdeg = vertex_ids(rows[i])
        bdy = np.zeros(vdeg.shape[0], np.bool_)
        for d in range(rows.shape[1]):
            if outer[d]:
                bdy[vid[d]] = True
        low = 0
        for v in range(vdeg.shape[0]):
            if vdeg[v] < (t_bdy if bdy[v] else t_int):
                low += 1
        out[i] = low <= exceptions
    return out
