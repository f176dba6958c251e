"""Braiding tests: Cartan factor, truncated R, coefficient formulas, YBE."""
import pytest
from gmpy2 import mpq

from qsl21.scalar import Cyc, RootConfig
from qsl21.linalg import Mat, invert
from qsl21.repmod import build_typical, tensor, trivial_module, typical_index, _kron
from qsl21.catops import decompose, hom_space, is_intertwiner
from qsl21.braid import BraidingMap, braiding, flip_map, k_operator, truncated_r
from qsl21.mtrace import (
    ModifiedDimensionTable,
    double_braiding_scalars,
    mdim,
    partial_trace_right,
)


def _entry(mat, r, c):
    v = mat.d.get((r, c))
    return Cyc.zero(mat.N) if v is None else v


def test_k_operator_diagonal():
    cfg = RootConfig(3, 15)
    va = build_typical(cfg, (0, mpq(1, 3)))
    vb = build_typical(cfg, (0, mpq(1, 5)))
    K = k_operator(va, vb)
    assert all(r == c for (r, c) in K.d)
    assert K.nnz() == 16
    # highest (x) highest carries exponent -n a' - a n' - 2 a a' = -2/15
    assert _entry(K, 0, 0) == Cyc(45, {43: 1})
    # w_{0,1,0} (x) w'_{1,0,0}: h-weights (-1, 4/3) and (1, 1/5), exponent -5/3
    assert _entry(K, 6, 6) == Cyc(45, {20: 1})
    # swapping the two weight vectors leaves the exponent alone
    KR = k_operator(vb, va)
    for i in range(4):
        for j in range(4):
            assert _entry(K, i * 4 + j, i * 4 + j) == _entry(KR, j * 4 + i, j * 4 + i)
    # zero weights act trivially
    assert k_operator(trivial_module(cfg), va) == Mat.identity(4, 45)
    # exponent denominator 9 does not divide denomBound 3
    tight = RootConfig(3, 3)
    w = build_typical(tight, (0, mpq(1, 3)))
    with pytest.raises(ValueError):
        k_operator(w, w)


def test_truncated_r_highest_weight():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (1, mpq(1, 3)))
    B = build_typical(cfg, (0, mpq(1, 5)))
    R = truncated_r(A, B)
    one = Cyc.one(45)
    # columns w_{0,0,0} (x) y are fixed pointwise
    for j in range(4):
        col = [(r, v) for (r, c), v in R.d.items() if c == j and not v.is_zero()]
        assert col == [(j, one)]
    # on w (x) w'_{0,0,0} the only term keeping w'_{0,0,0} on the right is w itself
    for i in range(8):
        col = i * 4
        assert _entry(R, col, col) == one
        for r in range(0, 32, 4):
            if r != col:
                assert _entry(R, r, col).is_zero()
    # a trivial factor on either side forces the identity
    assert truncated_r(trivial_module(cfg), A) == Mat.identity(8, 45)
    assert truncated_r(A, trivial_module(cfg)) == Mat.identity(8, 45)


# braiding V(1,1/3) with V(0,1/5) at l=3, denomBound 15: frozen zeta_45 powers
HIGHEST_LEFT = {(0, 0): 40, (0, 1): 20, (1, 0): 35, (1, 1): 15}
HIGHEST_RIGHT = {
    (0, 0, 0): 40, (0, 0, 1): 40, (0, 1, 0): 37, (0, 1, 1): 37,
    (1, 0, 0): 37, (1, 0, 1): 37, (1, 1, 0): 34, (1, 1, 1): 34,
}


def test_braiding_coefficient_formulas():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (1, mpq(1, 3)))
    B = build_typical(cfg, (0, mpq(1, 5)))
    c = braiding(A, B).matrix
    # image of w_{0,0,0} (x) w'_{r',s',0} is a single scaled basis vector
    for (rp, sp), e in HIGHEST_LEFT.items():
        j = typical_index(0, rp, sp, 0)
        col = [(r, v) for (r, cc), v in c.d.items() if cc == j and not v.is_zero()]
        assert col == [(j * 8, Cyc(45, {e: 1}))]
    # image of w_{r,s,p} (x) w'_{0,0,0}: the w'_{0,0,0} (x) . part is diagonal
    for (r, s, p), e in HIGHEST_RIGHT.items():
        i = typical_index(1, r, s, p)
        col = i * 4
        assert _entry(c, i, col) == Cyc(45, {e: 1})
        for row in range(8):
            if row != i:
                assert _entry(c, row, col).is_zero()


def test_braiding_intertwiner_invertible():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (1, mpq(1, 3)))
    B = build_typical(cfg, (0, mpq(1, 5)))
    c = braiding(A, B)
    assert isinstance(c, BraidingMap)
    assert c.reps == (mpq(1, 3), mpq(1, 5))
    T12 = tensor(A, B)
    T21 = tensor(B, A)
    assert is_intertwiner(T12, T21, c.matrix)
    inv = invert(c.matrix)
    assert c.matrix @ inv == Mat.identity(32, 45)
    assert inv @ c.matrix == Mat.identity(32, 45)


def test_yang_baxter():
    cfg = RootConfig(5, 9)
    V = build_typical(cfg, (0, mpq(1, 3)))
    c = braiding(V, V).matrix
    I4 = Mat.identity(4, 45)
    T2 = tensor(V, V)
    c12 = _kron(c, I4, 0, T2.parity, 45)
    c23 = _kron(I4, c, 0, V.parity, 45)
    assert c12 @ (c23 @ c12) == c23 @ (c12 @ c23)


def test_braiding_naturality():
    cfg = RootConfig(3, 15)
    T = tensor(build_typical(cfg, (0, mpq(1, 3))), build_typical(cfg, (0, mpq(1, 5))))
    M = build_typical(cfg, (0, mpq(1)))
    I4 = Mat.identity(4, 45)
    cTM = braiding(T, M).matrix
    cMT = braiding(M, T).matrix
    homTT = hom_space(T, T)
    assert len(homTT) == 3
    for f in homTT:
        assert cTM @ _kron(f, I4, 0, T.parity, 45) == _kron(I4, f, 0, M.parity, 45) @ cTM
        assert cMT @ _kron(I4, f, 0, M.parity, 45) == _kron(f, I4, 0, T.parity, 45) @ cMT


def test_braiding_rep_change():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (1, mpq(1, 3)))
    B = build_typical(cfg, (0, mpq(1, 5)))
    c1 = braiding(A, B)
    c2 = braiding(A, B, reps=(mpq(1, 3) + 3, mpq(1, 5)))
    assert c2.reps == (mpq(10, 3), mpq(1, 5))
    assert c1.matrix != c2.matrix
    D = c2.matrix @ invert(c1.matrix)
    T21 = tensor(B, A)
    assert is_intertwiner(T21, T21, D)
    rec = decompose(T21)
    assert rec.complete
    for _, iota, pi in rec.entries:
        g = pi @ (D @ iota)
        s = _entry(g, 0, 0)
        assert not s.is_zero()
        assert g == Mat.identity(g.rows, 45).scale(s)
    with pytest.raises(ValueError):
        braiding(A, B, reps=(mpq(4, 3), mpq(1, 5)))
    with pytest.raises(ValueError):
        braiding(T21, A, reps=(0, mpq(1, 3)))


def test_flip_map_signs():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (0, mpq(1, 3)))
    tau = flip_map(A, A)
    one = Cyc.one(45)
    # w_{0,0,0} even at index 0, w_{0,1,0} odd at index 1
    assert _entry(tau, 0 * 4 + 1, 1 * 4 + 0) == one
    assert _entry(tau, 1 * 4 + 1, 1 * 4 + 1) == -one
    assert tau @ tau == Mat.identity(16, 45)


def test_double_braiding_partial_trace():
    cfg = RootConfig(3, 15)
    A = build_typical(cfg, (1, mpq(2, 5)))
    B = build_typical(cfg, (0, mpq(1, 3)))
    sA, sB = double_braiding_scalars(cfg, 1, mpq(2, 5), mpq(1, 3))
    cAB = braiding(A, B).matrix
    cBA = braiding(B, A).matrix
    ptrA = partial_trace_right(tensor(A, B), cBA @ cAB)
    assert ptrA == Mat.identity(8, 45).scale(sA)
    ptrB = partial_trace_right(tensor(B, A), cAB @ cBA)
    assert ptrB == Mat.identity(4, 45).scale(sB)
    # the normalized ratio of the two partial traces recovers the modified dimension
    table = ModifiedDimensionTable(cfg)
    norm = cfg.brace(mpq(1, 3)) * cfg.brace(mpq(4, 3))
    assert mdim(table, (1, mpq(2, 5))) == sB * (norm * sA).inverse()
