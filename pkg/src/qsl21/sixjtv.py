"""Rebracketing tensors over multiplicity spaces and the edge-labeled state sum.

mult_space extracts a pairing-normalized basis of the surviving intertwiners
Hom(V_k, V_i (x) V_j).  sixj solves the exact change of basis between the two
parenthesizations of a triple product, one target channel per tensor, and
re-verifies the defining identity after every solve.  pachner23_check
contracts five such tensors into the bistellar-move identity, with the
modified dimension weighting the internal label.  tv_state_sum evaluates the
weighted tensor contraction over all grading-compatible edge labelings of a
triangulation; positive tetrahedra contribute forward blocks, negative ones
inverse blocks, so every glued face pairs a covariant with a contravariant
index.
"""
from __future__ import annotations

import itertools

from gmpy2 import mpq

from .catops import HomBasis, hom_space
from .charb import b_map, grading_slice
from .linalg import Mat, invert, rref
from .mtrace import ModifiedDimensionTable
from .repmod import SimpleLabel, WeightModule, _kron, build_typical, tensor
from .scalar import Cyc, RootConfig, rat_mod


def _as_label(l: int, lab) -> SimpleLabel:
    """Coerce a (n, alpha) pair or label to its reduced representative."""
    if isinstance(lab, SimpleLabel):
        return SimpleLabel.reduced(l, lab.n, lab.alphaTilde)
    n, a = lab
    return SimpleLabel.reduced(l, int(n), mpq(a))


class MultiplicitySpace:
    """Pairing-normalized basis of Hom(V_k, V_i (x) V_j) in the quotient.

    basis maps V_k into the product, dualBasis maps back, and the composition
    scalar of dualBasis[a] after basis[b] is delta_ab.  Mixed-parity
    compositions vanish on a simple target, so the normalization never mixes
    parity; parities[a] tags basis[a] and its dual alike.
    """

    __slots__ = ("triple", "basis", "dualBasis", "parities")

    def __init__(self, triple, basis: HomBasis, dualBasis: HomBasis, parities):
        self.triple = triple
        self.basis = basis
        self.dualBasis = dualBasis
        self.parities = parities

    def __len__(self):
        return len(self.basis.maps) if self.basis is not None else 0

    def __repr__(self):
        return f"MultiplicitySpace({self.triple}, dim={len(self)})"


class SixJTensor:
    """One channel block of the rebracketing identity.

    coeff is indexed by (a, b, c, d) over H(i,j,m), H(m,k,l), H(j,k,n) and
    H(i,n,l); zero entries are omitted.  The defining identity expands
    (x_a (x) Id) o y_b over every admissible channel n at once; this object
    holds the raw change-of-basis block for its own n.
    """

    __slots__ = ("labels", "dims", "coeff")

    def __init__(self, labels, dims, coeff):
        self.labels = labels
        self.dims = dims
        self.coeff = coeff

    def is_zero_tensor(self) -> bool:
        return not self.coeff

    def __repr__(self):
        i, j, k, l, m, n = self.labels
        return f"SixJTensor({i},{j},{k},{l};{m},{n}; dims={self.dims})"

    def to_obj(self) -> dict:
        return {
            "labels": [lab.to_obj() for lab in self.labels],
            "dims": list(self.dims),
            "coeff": {
                ",".join(map(str, key)): self.coeff[key].to_obj()
                for key in sorted(self.coeff)
            },
        }


class InverseSixJTensor:
    """Inverse-direction block; coeff holds D^{cd}_{ab} keyed by (c, d, a, b)."""

    __slots__ = ("labels", "dims", "coeff")

    def __init__(self, labels, dims, coeff):
        self.labels = labels
        self.dims = dims
        self.coeff = coeff

    def __repr__(self):
        i, j, k, l, m, n = self.labels
        return f"InverseSixJTensor({i},{j},{k},{l};{m},{n}; dims={self.dims})"


class SixJCache:
    """Shared memo for the rebracketing pipeline, bound to one root config.

    Values per key are deterministic, so first-writes agree and setdefault
    keeps the memo equivalent to a sequential one (same contract as the
    modified dimension table).
    """

    __slots__ = (
        "cfg", "dims", "modules", "pairs", "rankData", "mults", "chans",
        "quads", "weights",
    )

    def __init__(self, cfg: RootConfig):
        self.cfg = cfg
        self.dims = ModifiedDimensionTable(cfg)
        self.modules: dict = {}
        self.pairs: dict = {}
        self.rankData: dict = {}
        self.mults: dict = {}
        self.chans: dict = {}
        self.quads: dict = {}
        self.weights: dict = {}

    def module(self, lab: SimpleLabel) -> WeightModule:
        got = self.modules.get(lab)
        if got is None:
            got = self.modules.setdefault(lab, build_typical(self.cfg, lab))
        return got

    def pair(self, i: SimpleLabel, j: SimpleLabel) -> WeightModule:
        got = self.pairs.get((i, j))
        if got is None:
            got = self.pairs.setdefault((i, j), tensor(self.module(i), self.module(j)))
        return got

    def mult(self, i, j, k) -> MultiplicitySpace:
        key = (i, j, k)
        got = self.mults.get(key)
        if got is None:
            got = self.mults.setdefault(key, _solve_mult(self, i, j, k))
        return got

    def channels(self, i, j) -> dict:
        """Surviving channel labels of V_i (x) V_j with their multiplicities."""
        got = self.chans.get((i, j))
        if got is None:
            got = self.chans.setdefault((i, j), _channel_dims(self, i, j))
        return got

    def quad(self, i, j, k, l) -> "QuadBlocks":
        key = (i, j, k, l)
        got = self.quads.get(key)
        if got is None:
            got = self.quads.setdefault(key, _solve_quad(self, i, j, k, l))
        return got

    def row(self, i, j, k, l, m) -> dict:
        return self.quad(i, j, k, l).rows.get(m, {})

    def row_inv(self, i, j, k, l, n) -> dict:
        return self.quad(i, j, k, l).rowsInv.get(n, {})

    def d(self, lab: SimpleLabel) -> Cyc:
        return self.dims.value(lab)

    def d_inv(self, lab: SimpleLabel) -> Cyc:
        got = self.weights.get(("dinv", lab))
        if got is None:
            got = self.weights.setdefault(("dinv", lab), self.dims.value(lab).inverse())
        return got

    def b(self, lab: SimpleLabel) -> Cyc:
        got = self.weights.get(("b", lab))
        if got is None:
            got = self.weights.setdefault(("b", lab), b_map(self.cfg, lab))
        return got


def _schur_scalar(M: Mat) -> Cyc:
    """Scalar s with M = s.Id, asserted exactly (endomorphism of a simple)."""
    assert M.rows == M.cols
    s = M.get(0, 0)
    assert M == Mat.identity(M.rows, M.N).scale(s)
    return s


def _parity_op(M: WeightModule, N: int) -> Mat:
    """Diagonal parity involution of the module."""
    J = Mat(M.dim, M.dim, N)
    one = Cyc.one(N)
    for r, p in enumerate(M.parity):
        J.set(r, r, -one if p % 2 else one)
    return J


def embed_left(x: Mat, px: int, passive: WeightModule, srcParity, N: int) -> Mat:
    """Tensor a morphism on the left slot: x (x) Id, parity-dressed.

    An odd morphism anticommutes with the odd part of the coproduct action,
    so its passive slot carries the parity involution instead of the
    identity; the dressed map commutes plainly with the action again.
    """
    B = _parity_op(passive, N) if px % 2 else Mat.identity(passive.dim, N)
    return _kron(x, B, 0, srcParity, N)


def embed_right(passive: WeightModule, u: Mat, pu: int, N: int) -> Mat:
    """Tensor a morphism on the right slot: Id (x) u, parity-dressed."""
    A = _parity_op(passive, N) if pu % 2 else Mat.identity(passive.dim, N)
    return _kron(A, u, pu, passive.parity, N)


def _rank_data(cache: SixJCache, i, j, k):
    """Hom bases both ways plus the pairing matrix and its rank selections.

    Returns None when the triple is structurally zero in the quotient: grading
    mismatch, or a boundary label whose modified dimension vanishes (then the
    composition pairing no longer computes the quotient rank, but the target
    is null there anyway).
    """
    cfg = cache.cfg
    key = (i, j, k)
    got = cache.rankData.get(key)
    if got is not None:
        return got if got != () else None
    for lab in (i, j, k):
        if not (0 <= lab.n <= cfg.lPrime - 1):
            raise ValueError(f"label {lab} outside the standard range")
        if not lab.is_generic():
            raise ValueError(f"grading of {lab} is not generic")
    if rat_mod(2 * (i.alphaTilde + j.alphaTilde), 1) == 0:
        raise ValueError("grading of the product is not generic")
    out = None
    if rat_mod(i.alphaTilde + j.alphaTilde - k.alphaTilde, 1) != 0:
        pass
    elif k.n == cfg.lPrime - 1 or i.n == cfg.lPrime - 1 or j.n == cfg.lPrime - 1:
        pass
    else:
        T = cache.pair(i, j)
        Vk = cache.module(k)
        fwd = hom_space(Vk, T)
        if len(fwd):
            bwd = hom_space(T, Vk)
            P = Mat(len(fwd), len(bwd), cfg.N)
            for a, f in enumerate(fwd.maps):
                for b, g in enumerate(bwd.maps):
                    if fwd.parities[a] != bwd.parities[b]:
                        continue
                    P.set(a, b, _schur_scalar(g @ f))
            rowSel = rref(P.transpose())[1]
            colSel = rref(P)[1]
            assert len(rowSel) == len(colSel)
            if rowSel:
                out = (fwd, bwd, P, rowSel, colSel)
    cache.rankData.setdefault(key, out if out is not None else ())
    return out


def _solve_mult(cache: SixJCache, i, j, k) -> MultiplicitySpace:
    """Pairing-normalized multiplicity space of V_k inside V_i (x) V_j."""
    data = _rank_data(cache, i, j, k)
    ruled = cache.channels(i, j).get(k, 0) if k.n < cache.cfg.lPrime - 1 else 0
    got = len(data[3]) if data is not None else 0
    assert got == ruled, "pairing rank disagrees with the reduction rule"
    if data is None:
        return MultiplicitySpace((i, j, k), None, None, [])
    fwd, bwd, P, rowSel, colSel = data
    cfg = cache.cfg
    S = P.submatrix(rowSel, colSel)
    Sinv = invert(S)
    maps = [fwd.maps[a] for a in rowSel]
    parities = [fwd.parities[a] for a in rowSel]
    dualMaps = []
    for idx in range(len(rowSel)):
        g = Mat(bwd.maps[0].rows, bwd.maps[0].cols, cfg.N)
        for kk, col in enumerate(colSel):
            c = Sinv.get(kk, idx)
            if not c.is_zero():
                g = g + bwd.maps[col].scale(c)
        dualMaps.append(g)
    one = cfg.one()
    for a, g in enumerate(dualMaps):
        for b, f in enumerate(maps):
            s = _schur_scalar(g @ f)
            assert s == (one if a == b else cfg.zero())
    basis = HomBasis(fwd.source, fwd.target, maps, parities)
    dualBasis = HomBasis(bwd.source, bwd.target, dualMaps, list(parities))
    return MultiplicitySpace((i, j, k), basis, dualBasis, parities)


def mult_space(cfg: RootConfig, i, j, k, cache: SixJCache | None = None) -> MultiplicitySpace:
    """Multiplicity space of channel k in V_i (x) V_j, quotient-normalized."""
    cache = cache if cache is not None else SixJCache(cfg)
    l = cfg.l
    return cache.mult(_as_label(l, i), _as_label(l, j), _as_label(l, k))


def _channel_dims(cache: SixJCache, i, j) -> dict:
    """Quotient multiplicity of every surviving channel inside V_i (x) V_j.

    Uses the rank-one reduction: with m <= n, the product reduces in the
    quotient to V(0,a) tensored with the ladder V(n+m-2s, b+s), s = 0..m,
    boundary rows dropped, and the rank-zero product contributes the three
    or four standard mult-one channels.  A boundary factor absorbs the whole
    product into the negligible ideal.  Every multiplicity space actually
    solved is cross-checked against this rule by assertion.
    """
    cfg = cache.cfg
    if i.n >= cfg.lPrime - 1 or j.n >= cfg.lPrime - 1:
        return {}
    (m_, a_), (n_, b_) = sorted(((i.n, i.alphaTilde), (j.n, j.alphaTilde)))
    wall = cfg.lPrime - 1
    cancelled = set()
    for step in range(m_ + 1):
        k = n_ + m_ - 2 * step
        if k > wall:
            cancelled.add(step + k - wall)
    out = {}
    for step in range(m_ + 1):
        k = n_ + m_ - 2 * step
        if k >= wall or step in cancelled:
            continue
        c = b_ + step
        terms = [(k, a_ + c), (k, a_ + c + 1), (k + 1, a_ + c)]
        if k >= 1:
            terms.append((k - 1, a_ + c + 1))
        for row, al in terms:
            if row >= wall:
                continue
            lab = SimpleLabel.reduced(cfg.l, row, al)
            out[lab] = out.get(lab, 0) + 1
    return out


def _channel_candidates(cache: SixJCache, i, j, k, l) -> list:
    """Channel labels n with H(j,k,n) and H(i,n,l) both nonzero."""
    out = []
    for lab in cache.channels(j, k):
        if cache.channels(i, lab).get(l):
            out.append(lab)
    return out


class QuadBlocks:
    """All rebracketing blocks of one (i, j, k, l) quadruple, verified.

    rows maps each inner label m to its channel blocks {n: SixJTensor};
    rowsInv maps each channel n to {m: InverseSixJTensor}.  Construction
    checks the two-sided inverse pairing between the families, which is the
    defining identity of the tensors in the semisimplified quotient.
    """

    __slots__ = ("labels", "rows", "rowsInv")

    def __init__(self, labels, rows, rowsInv):
        self.labels = labels
        self.rows = rows
        self.rowsInv = rowsInv


def _left_family(cache: SixJCache, i, j, k, l, m):
    """Left-parenthesized composites and their extraction functionals.

    Functionals are premultiplied into single wide matrices so that every
    coefficient extraction is a small product with the full Schur check.
    """
    cfg = cache.cfg
    A = cache.mult(i, j, m)
    B = cache.mult(m, k, l)
    Vk, Vm = cache.module(k), cache.module(m)
    pairParity = cache.pair(i, j).parity
    comps = {}
    for a, x in enumerate(A.basis.maps):
        KX = embed_left(x, A.parities[a], Vk, Vm.parity, cfg.N)
        for b, y in enumerate(B.basis.maps):
            comps[(a, b)] = KX @ y
    funcs = {}
    for a, xbar in enumerate(A.dualBasis.maps):
        KXbar = embed_left(xbar, A.parities[a], Vk, pairParity, cfg.N)
        for b, ybar in enumerate(B.dualBasis.maps):
            funcs[(a, b)] = ybar @ KXbar
    return A, B, comps, funcs


def _right_family(cache: SixJCache, i, j, k, l, n):
    """Right-parenthesized composites and their extraction functionals."""
    cfg = cache.cfg
    U = cache.mult(j, k, n)
    V = cache.mult(i, n, l)
    Vi = cache.module(i)
    comps = {}
    funcs = {}
    for c, u in enumerate(U.basis.maps):
        KU = embed_right(Vi, u, U.parities[c], cfg.N)
        KUbar = embed_right(Vi, U.dualBasis.maps[c], U.parities[c], cfg.N)
        for d, v in enumerate(V.basis.maps):
            comps[(c, d)] = KU @ v
            funcs[(c, d)] = V.dualBasis.maps[d] @ KUbar
    return U, V, comps, funcs


def _solve_quad(cache: SixJCache, i, j, k, l) -> QuadBlocks:
    """Extract and verify every block of the quadruple's rebracketing.

    Forward coefficients come from the right-channel functionals applied to
    the left composites, inverse coefficients from the mirror extraction.
    Each extraction kills negligible-factoring morphisms, so the numbers are
    the quotient coefficients; the defining identity is then re-verified as
    the exact two-sided pairing C.D = D.C = identity over the full index
    sets.  Any failure, including one side of the quadruple being empty
    while the other is not, is a hard error.
    """
    mCands = [m for m in cache.channels(i, j) if cache.channels(m, k).get(l)]
    nCands = _channel_candidates(cache, i, j, k, l)
    rows = {}
    rowsInv = {}
    leftFams = {m: _left_family(cache, i, j, k, l, m) for m in mCands}
    rightFams = {n: _right_family(cache, i, j, k, l, n) for n in nCands}
    for m in mCands:
        A, B, lComps, _ = leftFams[m]
        blocks = {}
        for n in nCands:
            U, V, _, rFuncs = rightFams[n]
            coeff = {}
            for (a, b), L in lComps.items():
                for (c, d), F in rFuncs.items():
                    s = _schur_scalar(F @ L)
                    if not s.is_zero():
                        coeff[(a, b, c, d)] = s
            blocks[n] = SixJTensor(
                (i, j, k, l, m, n), (len(A), len(B), len(U), len(V)), coeff)
        rows[m] = blocks
    for n in nCands:
        U, V, rComps, _ = rightFams[n]
        blocks = {}
        for m in mCands:
            A, B, _, lFuncs = leftFams[m]
            coeff = {}
            for (c, d), R in rComps.items():
                for (a, b), F in lFuncs.items():
                    s = _schur_scalar(F @ R)
                    if not s.is_zero():
                        coeff[(c, d, a, b)] = s
            blocks[m] = InverseSixJTensor(
                (i, j, k, l, m, n), (len(U), len(V), len(A), len(B)), coeff)
        rowsInv[n] = blocks
    quad = QuadBlocks((i, j, k, l), rows, rowsInv)
    _verify_quad(cache, quad, leftFams, rightFams)
    return quad


def _verify_quad(cache: SixJCache, quad: QuadBlocks, leftFams, rightFams):
    """Exact two-sided inverse pairing between forward and inverse blocks."""
    zero, one = cache.cfg.zero(), cache.cfg.one()
    leftIdx = [
        (m, a, b) for m, fam in leftFams.items() for (a, b) in fam[2]
    ]
    rightIdx = [
        (n, c, d) for n, fam in rightFams.items() for (c, d) in fam[2]
    ]
    assert len(leftIdx) == len(rightIdx), \
        "rebracketing index counts disagree between the two parenthesizations"
    for (m, a, b) in leftIdx:
        for (m2, a2, b2) in leftIdx:
            acc = zero
            for n in quad.rowsInv:
                C = quad.rows[m][n].coeff
                D = quad.rowsInv[n][m2].coeff
                for (c, d) in rightFams[n][2]:
                    v1 = C.get((a, b, c, d))
                    if v1 is None:
                        continue
                    v2 = D.get((c, d, a2, b2))
                    if v2 is not None:
                        acc = acc + v1 * v2
            want = one if (m, a, b) == (m2, a2, b2) else zero
            assert acc == want, "rebracketing blocks are not mutually inverse"
    for (n, c, d) in rightIdx:
        for (n2, c2, d2) in rightIdx:
            acc = zero
            for m in quad.rows:
                D = quad.rowsInv[n][m].coeff
                C = quad.rows[m][n2].coeff
                for (a, b) in leftFams[m][2]:
                    v1 = D.get((c, d, a, b))
                    if v1 is None:
                        continue
                    v2 = C.get((a, b, c2, d2))
                    if v2 is not None:
                        acc = acc + v1 * v2
            want = one if (n, c, d) == (n2, c2, d2) else zero
            assert acc == want, "rebracketing blocks are not mutually inverse"


def sixj(cfg: RootConfig, i, j, k, l, m, n, cache: SixJCache | None = None) -> SixJTensor:
    """Rebracketing tensor for the given six labels, channel block n.

    The defining identity (x_a (x) Id) o y_b = sum over channels and (c, d)
    of C^{ab}_{cd} (Id (x) u_c) o v_d holds in the semisimplified quotient,
    where the trace pairing kills negligible-factoring morphisms.  The whole
    quadruple is extracted at once and re-verified through the exact
    two-sided inverse pairing with the mirror extraction; the requested
    block is returned, empty when either parenthesization chain dies.
    """
    cache = cache if cache is not None else SixJCache(cfg)
    i, j, k, l, m, n = (_as_label(cfg.l, lab) for lab in (i, j, k, l, m, n))
    for lab in (i, j, k, l, m, n):
        if not lab.is_generic():
            raise ValueError(f"grading of {lab} is not generic")
    row = cache.row(i, j, k, l, m)
    got = row.get(n)
    if got is None:
        dims = (
            len(cache.mult(i, j, m)), len(cache.mult(m, k, l)),
            len(cache.mult(j, k, n)), len(cache.mult(i, n, l)),
        )
        got = SixJTensor((i, j, k, l, m, n), dims, {})
    return got


def pachner23_check(cfg: RootConfig, i, j, k, h, t, m, s, n, w,
                    cache: SixJCache | None = None, mutate_d: bool = False) -> dict:
    """Check the bistellar 2-3 identity on one labeling of the configuration.

    Two-tetrahedron side: the tensors (m,k,h,t;s,w) and (i,j,w,t;m,n),
    contracted over the shared face H(m,w,t), with a parity crossing sign
    between the H(i,j,m) and H(k,h,w) indices.  Three-tetrahedron side: sum
    over the internal edge label weighted by its modified dimension, three
    tensors contracted over the internal faces.  Every tensor is divided by
    the modified dimension of its own inner product channel.  mutate_d
    replaces the internal weight by 1 and must break any nonzero instance.
    """
    cache = cache if cache is not None else SixJCache(cfg)
    i, j, k, h, t, m, s, n, w = (
        _as_label(cfg.l, lab) for lab in (i, j, k, h, t, m, s, n, w))
    T1 = sixj(cfg, m, k, h, t, s, w, cache)
    T2 = sixj(cfg, i, j, w, t, m, n, cache)
    Hm = cache.mult(i, j, m)
    Hw = cache.mult(k, h, w)
    norm = (cache.d(s) * cache.d(m)).inverse()
    lhs = {}
    for (q, r, cidx, e), v1 in T1.coeff.items():
        for (p, e2, bidx, aidx), v2 in T2.coeff.items():
            if e2 != e:
                continue
            v = v1 * v2 * norm
            if Hm.parities[p] and Hw.parities[cidx]:
                v = -v
            key = (p, q, r, cidx, bidx, aidx)
            got = lhs.get(key)
            lhs[key] = v if got is None else got + v
    lhs = {key: v for key, v in lhs.items() if not v.is_zero()}
    internal = [
        lab for lab in cache.channels(j, k)
        if cache.channels(i, lab).get(s)
    ]
    rhs = {}
    for np_ in internal:
        T3 = sixj(cfg, i, j, k, s, m, np_, cache)
        T4 = sixj(cfg, i, np_, h, t, s, n, cache)
        T5 = sixj(cfg, j, k, h, n, np_, w, cache)
        weight = cache.cfg.one() if mutate_d else cache.d(np_)
        factor = weight * (cache.d(m) * cache.d(s) * cache.d(np_)).inverse()
        for (p, q, cp, dp), v3 in T3.coeff.items():
            for (dp2, r, cpp, aidx), v4 in T4.coeff.items():
                if dp2 != dp:
                    continue
                v34 = v3 * v4
                for (cp2, cpp2, cidx, bidx), v5 in T5.coeff.items():
                    if cp2 != cp or cpp2 != cpp:
                        continue
                    key = (p, q, r, cidx, bidx, aidx)
                    v = v34 * v5 * factor
                    got = rhs.get(key)
                    rhs[key] = v if got is None else got + v
    rhs = {key: v for key, v in rhs.items() if not v.is_zero()}
    return {
        "match": lhs == rhs,
        "internal": internal,
        "lhsTerms": len(lhs),
        "rhsTerms": len(rhs),
        "mutated": mutate_d,
    }


def random_pachner_case(cfg: RootConfig, rng, cache: SixJCache | None = None,
                        attempts: int = 400):
    """Draw one admissible random labeling of the 2-3 configuration.

    Numerator draws run over a denominator taken from {3, 5, 7} compatibly
    with the root config; non-generic draws and dead-end channel chains are
    resampled.  Returns (i, j, k, h, t, m, s, n, w) or None when no labeling
    was found within the attempt budget.
    """
    cache = cache if cache is not None else SixJCache(cfg)
    dens = [d for d in (3, 5, 7) if cfg.denomBound % d == 0] or [cfg.denomBound]
    lp = cfg.lPrime
    for _ in range(attempts):
        den = rng.choice(dens)
        labs = [
            SimpleLabel.reduced(cfg.l, rng.randrange(0, lp - 1),
                                mpq(rng.randrange(1, cfg.l * den), den))
            for _ in range(4)
        ]
        if not all(lab.is_generic() for lab in labs):
            continue
        i, j, k, h = labs
        sums = (
            i.alphaTilde + j.alphaTilde,
            i.alphaTilde + j.alphaTilde + k.alphaTilde,
            i.alphaTilde + j.alphaTilde + k.alphaTilde + h.alphaTilde,
            j.alphaTilde + k.alphaTilde,
            j.alphaTilde + k.alphaTilde + h.alphaTilde,
            k.alphaTilde + h.alphaTilde,
        )
        if any(rat_mod(2 * x, 1) == 0 for x in sums):
            continue
        chIJ = list(cache.channels(i, j))
        if not chIJ:
            continue
        m = rng.choice(chIJ)
        chMK = list(cache.channels(m, k))
        if not chMK:
            continue
        s = rng.choice(chMK)
        chSH = list(cache.channels(s, h))
        if not chSH:
            continue
        t = rng.choice(chSH)
        chKH = list(cache.channels(k, h))
        if not chKH:
            continue
        w = rng.choice(chKH)
        nOpts = [
            lab for lab in cache.channels(j, w)
            if cache.channels(i, lab).get(t)
        ]
        if not nOpts:
            continue
        n = rng.choice(nOpts)
        return (i, j, k, h, t, m, s, n, w)
    return None


def _perm_sign(tup) -> int:
    """Sign of the permutation sorting the tuple."""
    inv = 0
    for a in range(len(tup)):
        for b in range(a + 1, len(tup)):
            if tup[a] > tup[b]:
                inv += 1
    return -1 if inv % 2 else 1


_SLOT_FACES = (
    ("a", (0, 1, 2), -1),
    ("b", (0, 2, 3), -1),
    ("c", (1, 2, 3), 1),
    ("d", (0, 1, 3), 1),
)

_EDGE_SLOTS = ((0, 1), (1, 2), (2, 3), (0, 3), (0, 2), (1, 3))


class HTriangulationData:
    """Combinatorial triangulation with link edges and an exact 1-cocycle.

    Tetrahedra are ordered vertex 4-tuples; a tetrahedron's orientation is
    the sign of the permutation sorting its tuple.  Edges are classes of
    vertex pairs (edgeGlue identifies oriented pairs), canonically oriented
    from the smaller to the larger vertex id and indexed in lexicographic
    order of their smallest representative pair.  Cocycle values are stored
    on the representative orientation; the reverse orientation carries the
    negative, and a face's three values must sum to an integer.  Faces are
    keyed by sorted vertex triples; every face must belong to exactly two
    tetrahedra with opposite induced orientations.
    """

    __slots__ = (
        "cfg", "vertices", "tetrahedra", "edgeGlue", "linkEdges", "edgeReps",
        "edgeLookup", "edgeValues", "tetraInfo",
    )

    def __init__(self, cfg: RootConfig, vertices, tetrahedra, edgeGlue=(),
                 linkEdges=(), cocycle=None):
        self.cfg = cfg
        self.vertices = [int(v) for v in vertices]
        self.tetrahedra = [tuple(int(v) for v in t) for t in tetrahedra]
        self.edgeGlue = [
            ((int(a), int(b)), (int(c), int(d)))
            for (a, b), (c, d) in edgeGlue
        ]
        self.linkEdges = [int(e) for e in linkEdges]
        self._build_edges()
        self._assign_cocycle(cocycle or {})
        self._build_tetra_info()
        self.validate()

    # -- construction

    def _build_edges(self):
        vset = set(self.vertices)
        pairs = set()
        for tet in self.tetrahedra:
            if len(set(tet)) != 4:
                raise ValueError(f"tetrahedron {tet} has repeated vertices")
            if not set(tet) <= vset:
                raise ValueError(f"tetrahedron {tet} uses unknown vertices")
            for x, y in itertools.combinations(sorted(tet), 2):
                pairs.add((x, y))
        parent = {p: p for p in pairs}
        psign = {p: 1 for p in pairs}

        def find(p):
            s = 1
            while parent[p] != p:
                s *= psign[p]
                p = parent[p]
            return p, s

        for (a, b), (c, d) in self.edgeGlue:
            p, sp = (a, b) if a < b else (b, a), 1 if a < b else -1
            q, sq = (c, d) if c < d else (d, c), 1 if c < d else -1
            if p not in parent or q not in parent:
                raise ValueError(f"edge identification {((a, b), (c, d))} names a missing edge")
            rp, wp = find(p)
            rq, wq = find(q)
            rel = sp * sq * wp * wq
            if rp == rq:
                if rel != 1:
                    raise ValueError(
                        f"edge {p} is identified with itself with reversed orientation")
                continue
            parent[rq] = rp
            psign[rq] = rel
        classes = {}
        for p in pairs:
            r, s = find(p)
            classes.setdefault(r, []).append((p, s))
        self.edgeReps = sorted(min(p for p, _ in members) for members in classes.values())
        repIndex = {rep: idx for idx, rep in enumerate(self.edgeReps)}
        self.edgeLookup = {}
        for members in classes.values():
            rep = min(p for p, _ in members)
            repSign = dict(members)[rep]
            for p, s in members:
                self.edgeLookup[p] = (repIndex[rep], s * repSign)

    def _assign_cocycle(self, cocycle):
        vals = [None] * len(self.edgeReps)
        for key, raw in cocycle.items():
            idx = int(key)
            if not 0 <= idx < len(self.edgeReps):
                raise ValueError(f"cocycle names unknown edge index {idx}")
            vals[idx] = rat_mod(mpq(raw), 1)
        missing = [idx for idx, v in enumerate(vals) if v is None]
        if missing:
            raise ValueError(f"cocycle is missing edge indices {missing}")
        self.edgeValues = vals

    def _build_tetra_info(self):
        self.tetraInfo = []
        for tet in self.tetrahedra:
            srt = tuple(sorted(tet))
            info = {
                "sorted": srt,
                "sign": _perm_sign(tet),
                "edges": [
                    self.edgeLookup[(srt[x], srt[y])] for x, y in _EDGE_SLOTS
                ],
            }
            self.tetraInfo.append(info)

    # -- access

    def edge_value(self, x: int, y: int) -> mpq:
        """Cocycle value on the oriented edge x to y."""
        flip = 1
        if x > y:
            x, y = y, x
            flip = -1
        idx, s = self.edgeLookup[(x, y)]
        return rat_mod(flip * s * self.edgeValues[idx], 1)

    def validate(self):
        """Recheck all structural and cocycle constraints, raising on failure."""
        bad = [v for v in self.edgeValues if rat_mod(2 * v, 1) == 0]
        if bad:
            raise ValueError(f"cocycle values {bad} lie in the degenerate half-integer set")
        badFaces = []
        for tet in self.tetrahedra:
            for x, y, z in itertools.combinations(sorted(tet), 3):
                if rat_mod(self.edge_value(x, y) + self.edge_value(y, z)
                           - self.edge_value(x, z), 1) != 0:
                    badFaces.append((x, y, z))
        if badFaces:
            raise ValueError(f"cocycle fails the face condition on {badFaces}")
        seen = {}
        for tIdx, info in enumerate(self.tetraInfo):
            srt = info["sorted"]
            for slot, pos, bSign in _SLOT_FACES:
                face = tuple(srt[p] for p in pos)
                seen.setdefault(face, []).append(info["sign"] * bSign)
        offenders = [face for face, signs in seen.items() if sorted(signs) != [-1, 1]]
        if offenders:
            raise ValueError(
                f"every face must belong to exactly two tetrahedra with opposite "
                f"orientations; offending faces {offenders}")
        if self.linkEdges:
            badIdx = [e for e in self.linkEdges if not 0 <= e < len(self.edgeReps)]
            if badIdx:
                raise ValueError(f"link edge indices {badIdx} out of range")
            count = {v: 0 for v in self.vertices}
            for e in self.linkEdges:
                x, y = self.edgeReps[e]
                count[x] += 1
                count[y] += 1
            badV = [v for v, c in count.items() if c != 2]
            if badV:
                raise ValueError(f"vertices {badV} do not meet exactly two link edges")

    def replaced(self, linkEdges=None, cocycle=None) -> HTriangulationData:
        """Copy with the link set or the cocycle overridden."""
        if cocycle is None:
            cocycle = {idx: v for idx, v in enumerate(self.edgeValues)}
        return HTriangulationData(
            self.cfg, self.vertices, self.tetrahedra, self.edgeGlue,
            self.linkEdges if linkEdges is None else linkEdges, cocycle)

    def to_obj(self) -> dict:
        return {
            "l": self.cfg.l,
            "denomBound": self.cfg.denomBound,
            "vertices": list(self.vertices),
            "tetrahedra": [list(t) for t in self.tetrahedra],
            "edgeGlue": [[list(p), list(q)] for p, q in self.edgeGlue],
            "linkEdges": list(self.linkEdges),
            "cocycle": {str(idx): str(v) for idx, v in enumerate(self.edgeValues)},
        }

    @staticmethod
    def from_obj(obj: dict) -> HTriangulationData:
        cfg = RootConfig(int(obj["l"]), int(obj["denomBound"]))
        return HTriangulationData(
            cfg, obj["vertices"], obj["tetrahedra"], obj.get("edgeGlue", ()),
            obj.get("linkEdges", ()), obj.get("cocycle", {}))

    def __repr__(self):
        return (f"HTriangulationData({len(self.vertices)} vertices, "
                f"{len(self.tetrahedra)} tetrahedra, {len(self.edgeReps)} edges)")


def states(tri: HTriangulationData):
    """Iterate all grading-compatible edge labelings, canonical orientation.

    Keys are edge indices; the value at the reversed orientation is the dual
    label by convention.  The count is the product of l*(l'-1) over edges;
    with no edges the single empty assignment is produced.
    """
    cfg = tri.cfg
    options = [
        grading_slice(cfg, v).labels for v in tri.edgeValues
    ]
    for combo in itertools.product(*options):
        yield dict(enumerate(combo))


def _tetra_labels(tri: HTriangulationData, info: dict, state: dict):
    """The six labels (i,j,k,l,m,n) of one tetrahedron under a state."""
    l = tri.cfg.l
    out = []
    for idx, sgn in info["edges"]:
        lab = state[idx]
        out.append(lab if sgn > 0 else lab.dual_label(l))
    return tuple(out)


def state_term(tri: HTriangulationData, state: dict, cache: SixJCache) -> Cyc:
    """Contribution of one state: edge weights times the tensor contraction.

    Inadmissible channel chains short-circuit to zero.  Each tetrahedron's
    block is divided by the modified dimension of its inner channel label.
    """
    cfg = tri.cfg
    zero = cfg.zero()
    tetra = []
    for info in tri.tetraInfo:
        i, j, k, l, m, n = _tetra_labels(tri, info, state)
        if not cache.channels(i, j).get(m):
            return zero
        if not cache.channels(m, k).get(l):
            return zero
        if not cache.channels(j, k).get(n):
            return zero
        if not cache.channels(i, n).get(l):
            return zero
        tetra.append((info, (i, j, k, l, m, n)))
    blocks = []
    for info, (i, j, k, l, m, n) in tetra:
        if info["sign"] > 0:
            blk = cache.row(i, j, k, l, m).get(n)
        else:
            blk = cache.row_inv(i, j, k, l, n).get(m)
        if blk is None or not blk.coeff:
            return zero
        blocks.append(blk)
    faceDim = {}
    faceOf = []
    for info, (i, j, k, l, m, n) in tetra:
        srt = info["sorted"]
        slots = {}
        dims = {
            "a": len(cache.mult(i, j, m)),
            "b": len(cache.mult(m, k, l)),
            "c": len(cache.mult(j, k, n)),
            "d": len(cache.mult(i, n, l)),
        }
        for slot, pos, _ in _SLOT_FACES:
            face = tuple(srt[p] for p in pos)
            slots[slot] = face
            faceDim[face] = dims[slot]
        faceOf.append(slots)
    faces = sorted(faceDim)
    csum = zero
    for combo in itertools.product(*(range(faceDim[f]) for f in faces)):
        at = dict(zip(faces, combo))
        prod = None
        for (info, _), blk, slots in zip(tetra, blocks, faceOf):
            key = (at[slots["a"]], at[slots["b"]], at[slots["c"]], at[slots["d"]])
            if info["sign"] < 0:
                key = (key[2], key[3], key[0], key[1])
            v = blk.coeff.get(key)
            if v is None:
                prod = None
                break
            prod = v if prod is None else prod * v
        if prod is not None:
            csum = csum + prod
    if csum.is_zero():
        return zero
    linkSet = set(tri.linkEdges)
    value = csum
    for idx, lab in state.items():
        value = value * (cache.b(lab) if idx in linkSet else cache.d(lab))
    for _, labels in tetra:
        value = value * cache.d_inv(labels[4])
    return value


def tv_state_sum(tri: HTriangulationData, linkEdges=None, cocycle=None,
                 cache: SixJCache | None = None) -> dict:
    """Weighted contraction over all states of the triangulation.

    Non-link edges weigh in the modified dimension, link edges the b value;
    empty products and the zero-tetrahedra contraction are 1.  Returns the
    exact value with the state counts.
    """
    if linkEdges is not None or cocycle is not None:
        tri = tri.replaced(linkEdges=linkEdges, cocycle=cocycle)
    tri.validate()
    cache = cache if cache is not None else SixJCache(tri.cfg)
    assert (cache.cfg.l, cache.cfg.denomBound) == (tri.cfg.l, tri.cfg.denomBound)
    total = tri.cfg.zero()
    count = 0
    nonzero = 0
    for state in states(tri):
        count += 1
        term = state_term(tri, state, cache) if state else tri.cfg.one()
        if not term.is_zero():
            nonzero += 1
            total = total + term
    return {"value": total, "stateCount": count, "nonzeroStates": nonzero}
