"""Category-level linear algebra: intertwiner spaces, isotypic decomposition,
duality morphisms and the negligible-quotient rank computation.

Morphisms are plain matrices (target.dim x source.dim); every solver returns
parity-homogeneous bases because even and odd parts of an intertwiner are
separately intertwiners.
"""
from __future__ import annotations

from gmpy2 import mpq

from .linalg import Mat, invert, nullspace, rank, rref
from .repmod import (
    GENERATORS, SimpleLabel, WeightModule, _kron, build_typical, typical_index,
)
from .scalar import Cyc, rat_mod

_EF = ("E1", "E2", "F1", "F2")


class HomBasis:
    """Basis of the intertwiner space Hom(source, target)."""

    __slots__ = ("source", "target", "maps", "parities")

    def __init__(self, source, target, maps, parities):
        self.source = source
        self.target = target
        self.maps = maps
        self.parities = parities

    def __len__(self):
        return len(self.maps)

    def __iter__(self):
        return iter(self.maps)

    def __repr__(self):
        return f"HomBasis(dim={len(self.maps)})"


def is_intertwiner(M1: WeightModule, M2: WeightModule, T: Mat) -> bool:
    """Exact check that T: M1 -> M2 commutes with all generator actions."""
    for g in GENERATORS:
        if not (M2.action[g] @ T - T @ M1.action[g]).is_zero():
            return False
    return True


def hom_space(M1: WeightModule, M2: WeightModule) -> HomBasis:
    """Solve the intertwining equations block-by-block per weight space.

    T K_i = K_i T restricts the support of T to pairs with equal mod-l
    weights; the remaining equations come from E1, E2, F1, F2.
    """
    if M1.cfg.N != M2.cfg.N or M1.cfg.l != M2.cfg.l:
        raise ValueError("hom_space needs a common root configuration")
    N = M1.cfg.N
    blocks1 = M1.weight_blocks()
    blocks2 = M2.weight_blocks()
    variables: list[tuple[int, int]] = []
    for key in sorted(set(blocks1) & set(blocks2)):
        for i1 in blocks1[key]:
            for i2 in blocks2[key]:
                variables.append((i2, i1))
    if not variables:
        return HomBasis(M1, M2, [], [])
    var_index = {v: k for k, v in enumerate(variables)}
    cols2 = {}
    rows1 = {}
    for g in _EF:
        c2: dict[int, list] = {}
        for (a2, i2), v in M2.action[g].d.items():
            c2.setdefault(i2, []).append((a2, v))
        cols2[g] = c2
        r1: dict[int, list] = {}
        for (i1, a1), v in M1.action[g].d.items():
            r1.setdefault(i1, []).append((a1, v))
        rows1[g] = r1
    eq_rows: dict[tuple, dict[int, Cyc]] = {}
    for k, (i2, i1) in enumerate(variables):
        for g in _EF:
            for a2, v in cols2[g].get(i2, ()):
                row = eq_rows.setdefault((g, a2, i1), {})
                row[k] = row[k] + v if k in row else v
            for a1, v in rows1[g].get(i1, ()):
                row = eq_rows.setdefault((g, i2, a1), {})
                row[k] = row[k] - v if k in row else -v
    A = Mat(len(eq_rows), len(variables), N)
    for r, row in enumerate(eq_rows.values()):
        for k, v in row.items():
            A.d[(r, k)] = v
    maps = []
    parities = []
    for sol in nullspace(A):
        T = Mat(M2.dim, M1.dim, N)
        par = None
        for (k, _), v in sol.d.items():
            if v.is_zero():
                continue
            i2, i1 = variables[k]
            T.d[(i2, i1)] = v
            p = (M2.parity[i2] - M1.parity[i1]) % 2
            if par is None:
                par = p
            else:
                assert par == p, "intertwiner is not parity homogeneous"
        maps.append(T)
        parities.append(0 if par is None else par)
    return HomBasis(M1, M2, maps, parities)


def highest_weight_vectors(M: WeightModule, weight) -> list[Mat]:
    """Basis of { v : E1 v = E2 v = 0 } in the given (k, gamma) weight space."""
    k, gamma = weight
    l = M.cfg.l
    key = (rat_mod(mpq(k), l), rat_mod(mpq(gamma), l))
    idx = M.weight_blocks().get(key, [])
    if not idx:
        return []
    cols = list(range(M.dim))
    E1 = M.action["E1"].submatrix(cols, idx)
    E2 = M.action["E2"].submatrix(cols, idx)
    stacked = Mat(2 * M.dim, len(idx), M.cfg.N, dict(E1.d))
    for (i, j), v in E2.d.items():
        stacked.d[(i + M.dim, j)] = v
    out = []
    for sol in nullspace(stacked):
        v = Mat(M.dim, 1, M.cfg.N)
        for (r, _), val in sol.d.items():
            if not val.is_zero():
                v.d[(idx[r], 0)] = val
        out.append(v)
    return out


def _f1_chain(M: WeightModule, v: Mat) -> list[Mat]:
    """[v, F1 v, F1^2 v, ...] until zero (capped at l'+1 applications)."""
    F1 = M.action["F1"]
    chain = [v]
    for _ in range(M.cfg.lPrime + 1):
        nxt = F1 @ chain[-1]
        if nxt.is_zero():
            return chain
        chain.append(nxt)
    raise ValueError("F1 chain did not terminate")


def _typical_embedding(M: WeightModule, v: Mat) -> tuple[int, Mat]:
    """Injection of a 4(n+1)-dim simple into M generated by hw vector v.

    The images of the (rho, sigma, p) basis follow from the generator
    formulas: w(0,0,p) = F1^p v, w(1,0,p) = F2 w(0,0,p),
    w(0,1,p) = w(1,0,p+1) - q F1 w(1,0,p) (last term only at p = n),
    w(1,1,p) = F2 w(0,1,p).
    """
    F1, F2 = M.action["F1"], M.action["F2"]
    q = M.cfg.q_power(1)
    w00 = _f1_chain(M, v)
    n = len(w00) - 1
    w10 = [F2 @ w for w in w00]
    w01 = [w10[p + 1] - (F1 @ w10[p]).scale(q) for p in range(n)]
    w01.append((F1 @ w10[n]).scale(-q))
    w11 = [F2 @ w for w in w01]
    cols = {(0, 0): w00, (0, 1): w01, (1, 0): w10, (1, 1): w11}
    iota = Mat(M.dim, 4 * (n + 1), M.cfg.N)
    for (rho, sigma), vecs in cols.items():
        for p, w in enumerate(vecs):
            j = typical_index(n, rho, sigma, p)
            for (i, _), val in w.d.items():
                if not val.is_zero():
                    iota.d[(i, j)] = val
    return n, iota


class DecompositionRecord:
    """Isotypic decomposition data: per-summand labels with iota and pi."""

    __slots__ = ("module", "entries", "complete", "complementDim")

    def __init__(self, module, entries, complete, complementDim):
        self.module = module
        self.entries = entries  # list of (SimpleLabel, iota, pi)
        self.complete = complete
        self.complementDim = complementDim

    def labels(self) -> list[SimpleLabel]:
        return [lab for lab, _, _ in self.entries]

    def label_multiset(self) -> dict[SimpleLabel, int]:
        out: dict[SimpleLabel, int] = {}
        for lab in self.labels():
            out[lab] = out.get(lab, 0) + 1
        return out

    def to_obj(self) -> list[dict]:
        seen: list[SimpleLabel] = []
        counts: dict[SimpleLabel, int] = {}
        for lab in self.labels():
            if lab not in counts:
                seen.append(lab)
            counts[lab] = counts.get(lab, 0) + 1
        return [{"label": lab.to_obj(), "multiplicity": counts[lab]} for lab in seen]

    def __repr__(self):
        tag = "" if self.complete else f", complement={self.complementDim}"
        return f"DecompositionRecord({self.labels()}{tag})"


def decompose(M: WeightModule) -> DecompositionRecord:
    """Split M into simple summands by peeling highest-weight vectors.

    Requires a generic mod-1 grading (otherwise raises).  When the
    generated simple submodules do not fill M, the record is flagged
    incomplete and carries the complement dimension; the reported
    injections and projections still satisfy pi_i iota_j = delta_ij.
    """
    g = M.grading()
    if rat_mod(2 * g, 1) == 0:
        raise ValueError("grading 0 or 1/2 mod 1 is not generic; cannot decompose")
    cfg = M.cfg
    E1, E2 = M.action["E1"], M.action["E2"]
    candidates = []
    for key in sorted(M.weight_blocks()):
        for v in highest_weight_vectors(M, key):
            n, iota = _typical_embedding(M, v)
            gamma = None
            for (i, _), val in v.d.items():
                if not val.is_zero():
                    gamma = rat_mod(M.hWeights[i][1], cfg.l)
                    break
            if gamma is None:
                continue
            lab = SimpleLabel(n, gamma)
            simple = build_typical(cfg, lab)
            if iota.nnz() and is_intertwiner(simple, M, iota):
                candidates.append((lab, iota))
    candidates.sort(key=lambda t: (t[0].n, t[0].alphaTilde), reverse=True)
    kept = []
    P = Mat(M.dim, 0, cfg.N, {})
    cur_rank = 0
    for lab, iota in candidates:
        trial = P.hstack(iota)
        r = rank(trial)
        if r == trial.cols:
            kept.append((lab, iota))
            P = trial
            cur_rank = r
    complete = cur_rank == M.dim
    complement = M.dim - cur_rank
    # extend P with unit columns on non-pivot coordinates, invert, slice rows
    entries = []
    if kept:
        _, piv = rref(P.transpose())
        ext_cols = [j for j in range(M.dim) if j not in set(piv)]
        Pext = P
        for j in ext_cols:
            Pext = Pext.hstack(Mat(M.dim, 1, cfg.N, {(j, 0): cfg.one()}))
        Pinv = invert(Pext)
        off = 0
        for lab, iota in kept:
            w = iota.cols
            pi = Pinv.submatrix(list(range(off, off + w)), list(range(M.dim)))
            entries.append((lab, iota, pi))
            off += w
    return DecompositionRecord(M, entries, complete, complement)


def duality_maps(M: WeightModule) -> tuple[Mat, Mat, Mat, Mat]:
    """(coevR, evR, coevL, evL) for M, verified to satisfy the zig-zags.

    coevR: C -> M (x) M*, 1 -> sum v_i (x) v_i*
    evR:   M* (x) M -> C, f (x) v -> f(v)
    coevL: C -> M* (x) M, 1 -> sum (-1)^|v_i| v_i* (x) K2^2 v_i
    evL:   M (x) M* -> C, v (x) f -> (-1)^(|f||v|) f(K2^-2 v)
    """
    cfg = M.cfg
    n = M.dim
    N = cfg.N
    one = cfg.one()
    coevR = Mat(n * n, 1, N, {(i * n + i, 0): one for i in range(n)})
    evR = Mat(1, n * n, N, {(0, i * n + i): one for i in range(n)})
    coevL = Mat(n * n, 1, N, {})
    evL = Mat(1, n * n, N, {})
    for i in range(n):
        s = -1 if M.parity[i] % 2 else 1
        up = cfg.q_power(2 * M.hWeights[i][1])
        dn = cfg.q_power(-2 * M.hWeights[i][1])
        coevL.d[(i * n + i, 0)] = up if s > 0 else -up
        evL.d[(0, i * n + i)] = dn if s > 0 else -dn
    I = Mat.identity(n, N)
    z1 = _kron(I, evR, 0, [], N) @ _kron(coevR, I, 0, [], N)
    z2 = _kron(evR, I, 0, [], N) @ _kron(I, coevR, 0, [], N)
    z3 = _kron(evL, I, 0, [], N) @ _kron(I, coevL, 0, [], N)
    z4 = _kron(I, evL, 0, [], N) @ _kron(coevL, I, 0, [], N)
    for z in (z1, z2, z3, z4):
        if z != I:
            raise AssertionError("zig-zag identity failed")
    return coevR, evR, coevL, evL


def pick_ij_pair(gradings, l: int | None = None) -> tuple[int, int]:
    """First pair (i, j), i < j, 1-based, whose grading sum stays generic.

    Inputs are mod-1 gradings; each must avoid (1/4)Z and their total must
    avoid the forbidden set {0, l/2 mod 1} (which is {0, 1/2} for odd or
    unknown l, {0} for even l).
    """
    gs = [rat_mod(x, 1) for x in gradings]
    forbidden = {mpq(0)}
    if l is None or l % 2:
        forbidden.add(mpq(1, 2))
    for x in gs:
        if rat_mod(4 * x, 1) == 0:
            raise ValueError(f"grading {x} lies in (1/4)Z mod 1")
    total = rat_mod(sum(gs), 1)
    if total in forbidden:
        raise ValueError("total grading is in the forbidden set")
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if rat_mod(gs[i] + gs[j], 1) not in forbidden:
                return (i + 1, j + 1)
    raise ValueError("no valid index pair exists")


def negligible_rank(M1: WeightModule, M2: WeightModule) -> tuple[int, int]:
    """(dim Hom, rank deficiency of the trace pairing t(g o f)).

    The dimension of Hom in the semisimplified category is the difference
    of the two numbers.
    """
    from .mtrace import mtrace_ss  # deferred import; mtrace builds on this module

    hom12 = hom_space(M1, M2)
    hom21 = hom_space(M2, M1)
    rec1 = decompose(M1)
    if not rec1.complete:
        raise ValueError("trace pairing needs a semisimple source module")
    m = len(hom12)
    if m == 0:
        return 0, 0
    pair = Mat(m, len(hom21), M1.cfg.N)
    for a, f in enumerate(hom12.maps):
        for b, gmap in enumerate(hom21.maps):
            t = mtrace_ss(gmap @ f, rec1)
            if not t.is_zero():
                pair.d[(a, b)] = t
    return m, m - rank(pair)
