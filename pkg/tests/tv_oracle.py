"""Brute-force oracle for the doubled-tetrahedron state sum.

Evaluates every state by direct composition of intertwiners and Schur
extraction, with no use of the solved rebracketing blocks; only the
multiplicity bases themselves are shared (the contraction is a trace, so
its value does not depend on that choice).
"""

from qsl21.linalg import Mat
from qsl21.sixjtv import SixJCache, embed_left, embed_right, states


def _scalar(M: Mat):
    s = M.get(0, 0)
    assert M == Mat.identity(M.rows, M.N).scale(s)
    return s


def doubled_term(cache: SixJCache, labels):
    """Face-index sum of the two per-tetrahedron scalars, composed directly."""
    i, j, k, l, m, n = labels
    ch = cache.channels
    if not (ch(i, j).get(m) and ch(m, k).get(l)
            and ch(j, k).get(n) and ch(i, n).get(l)):
        return cache.cfg.zero()
    A = cache.mult(i, j, m)
    B = cache.mult(m, k, l)
    U = cache.mult(j, k, n)
    V = cache.mult(i, n, l)
    N = cache.cfg.N
    Vi, Vk, Vm = cache.module(i), cache.module(k), cache.module(m)
    pairParity = cache.pair(i, j).parity
    total = cache.cfg.zero()
    for a in range(len(A)):
        px = A.parities[a]
        XI = embed_left(A.basis.maps[a], px, Vk, Vm.parity, N)
        XbI = embed_left(A.dualBasis.maps[a], px, Vk, pairParity, N)
        for b in range(len(B)):
            L = XI @ B.basis.maps[b]
            G = B.dualBasis.maps[b] @ XbI
            for c in range(len(U)):
                pu = U.parities[c]
                IU = embed_right(Vi, U.basis.maps[c], pu, N)
                IUb = embed_right(Vi, U.dualBasis.maps[c], pu, N)
                for d in range(len(V)):
                    R = IU @ V.basis.maps[d]
                    F = V.dualBasis.maps[d] @ IUb
                    fwd = _scalar(F @ L)
                    if fwd.is_zero():
                        continue
                    bwd = _scalar(G @ R)
                    if not bwd.is_zero():
                        total = total + fwd * bwd
    return total


def tv_brute_force(tri, cache: SixJCache | None = None) -> dict:
    """State sum of the doubled tetrahedron by per-state direct evaluation."""
    cfg = tri.cfg
    assert [tuple(t) for t in tri.tetrahedra] == [(0, 1, 2, 3), (0, 1, 3, 2)]
    assert not tri.edgeGlue
    cache = cache if cache is not None else SixJCache(cfg)
    linkSet = set(tri.linkEdges)
    total = cfg.zero()
    count = 0
    nonzero = 0
    for state in states(tri):
        count += 1
        labels = (state[0], state[3], state[5], state[2], state[1], state[4])
        term = doubled_term(cache, labels)
        if term.is_zero():
            continue
        nonzero += 1
        for idx, lab in state.items():
            term = term * (cache.b(lab) if idx in linkSet else cache.d(lab))
        dinv = cache.d_inv(labels[4])
        total = total + term * dinv * dinv
    return {"value": total, "stateCount": count, "nonzeroStates": nonzero}
