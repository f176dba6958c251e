"""Quantum trace, right partial trace, and the modified trace on the ideal.

The modified trace is normalized so that d(V(0, 1/3)) = 1/({1/3}{4/3}); every
other modified dimension follows the closed form
d(V(n, a)) = {n+1}/({1}{a}{a+n+1}), which vanishes exactly at n = l'-1.  On a
semisimple module the trace is the d-weighted sum of the scalars through each
simple summand, where a summand reached by an odd embedding is the parity
shift of the standard simple and contributes with d negated.  That sign is
forced by the partial-trace axiom t_{U(x)W}(f) = t_U(ptr^W(f)): with it,
t(Id) of a 16-dim product of two 4-dim simples telescopes to 0 = qdim, and
without it the axiom fails by -1 on odd-embedded blocks.
"""
from __future__ import annotations

from gmpy2 import mpq

from .linalg import Mat
from .repmod import SimpleLabel, WeightModule
from .scalar import Cyc, RootConfig, rat_mod


def qtrace(M: WeightModule, f: Mat) -> Cyc:
    """Quantum trace of an endomorphism: the supertrace of K2^{-2} f."""
    if f.rows != M.dim or f.cols != M.dim:
        raise ValueError("quantum trace needs an endomorphism of M")
    cfg = M.cfg
    tot = Cyc.zero(cfg.N)
    for i in range(M.dim):
        v = f.d.get((i, i))
        if v is not None:
            w = cfg.q_power(-2 * M.hWeights[i][1]) * v
            tot = tot - w if M.parity[i] else tot + w
    return tot


def partial_trace_right(M: WeightModule, f: Mat) -> Mat:
    """Trace an endomorphism of M = U (x) W over the right factor W.

    Realizes (Id (x) evL)(f (x) Id)(Id (x) coevR), which on matrix entries
    reads ptr(f)[i',i] = sum_j (-1)^{|w_j|} q^{-2 h2(w_j)} f[(i',j),(i,j)].
    """
    if M.factors is None:
        raise ValueError("module carries no tensor factorization")
    if f.rows != M.dim or f.cols != M.dim:
        raise ValueError("partial trace needs an endomorphism of M")
    U, W = M.factors
    cfg = M.cfg
    wts = [cfg.q_power(-2 * W.hWeights[j][1]) for j in range(W.dim)]
    out = Mat(U.dim, U.dim, cfg.N)
    dW = W.dim
    for (r, c), v in f.d.items():
        i1, j1 = divmod(r, dW)
        i0, j0 = divmod(c, dW)
        if j1 == j0:
            w = wts[j1] * v
            out.add_to(i1, i0, -w if W.parity[j1] else w)
    return out


class ModifiedDimensionTable:
    """Memo of modified dimensions keyed by SimpleLabel.

    Values are deterministic, so concurrent first-writes of one key agree and
    dict.setdefault keeps the memo equivalent to a sequential one.
    """

    __slots__ = ("cfg", "memo")

    def __init__(self, cfg: RootConfig):
        self.cfg = cfg
        self.memo: dict[SimpleLabel, Cyc] = {}

    def value(self, label: SimpleLabel) -> Cyc:
        got = self.memo.get(label)
        if got is not None:
            return got
        cfg = self.cfg
        n, a = label.n, label.alphaTilde
        for x in (a, a + n + 1):
            if rat_mod(2 * x, cfg.l) == 0:
                raise ValueError(f"bracket of {x} vanishes; d is undefined at {label}")
        den = cfg.brace(1) * cfg.brace(a) * cfg.brace(a + n + 1)
        val = cfg.brace(n + 1) * den.inverse()
        return self.memo.setdefault(label, val)


def mdim(table: ModifiedDimensionTable, label) -> Cyc:
    """Modified dimension d(V(n, a)) = {n+1}/({1}{a}{a+n+1}), memoized."""
    if not isinstance(label, SimpleLabel):
        n, a = label
        label = SimpleLabel.reduced(table.cfg.l, n, a)
    return table.value(label)


def _standard_parity(label: SimpleLabel, row: int) -> int:
    """Parity of basis vector `row` of the standard simple with this label."""
    block = row // (label.n + 1)
    return ((block >> 1) + block) & 1


def embedding_parity(M: WeightModule, label: SimpleLabel, iota: Mat) -> int:
    """Parity of an embedding of the labeled simple into M (0 even, 1 odd)."""
    par = None
    for (r, c), _ in iota.d.items():
        p = (M.parity[r] + _standard_parity(label, c)) & 1
        if par is None:
            par = p
        else:
            assert p == par, "embedding is not parity homogeneous"
    assert par is not None, "embedding must be nonzero"
    return par


def mtrace_ss(f: Mat, record, table: ModifiedDimensionTable | None = None) -> Cyc:
    """Modified trace of f in End(M), M decomposed completely by record.

    Odd-embedded summands are parity shifts and contribute with d negated.
    """
    if not record.complete:
        raise ValueError("modified trace needs a complete decomposition")
    M = record.module
    cfg = M.cfg
    if table is None:
        table = ModifiedDimensionTable(cfg)
    tot = Cyc.zero(cfg.N)
    for label, iota, pi in record.entries:
        g = pi @ (f @ iota)
        s = g.d.get((0, 0), Cyc.zero(cfg.N))
        assert (g - Mat.identity(g.rows, cfg.N).scale(s)).is_zero(), (
            "endomorphism of a simple summand is not scalar"
        )
        w = table.value(label) * s
        tot = tot - w if embedding_parity(M, label, iota) else tot + w
    return tot


def double_braiding_scalars(cfg: RootConfig, n: int, alpha, beta) -> tuple[Cyc, Cyc]:
    """Closed-form partial-trace scalars of the double braiding of A, B.

    For A = V(n, alpha) and B = V(0, beta), returns (sA, sB) where
    sA Id_A is the trace over B of the double braiding on A (x) B and
    sB Id_B is the trace over A of the reversed composite:

        sA = q^{-(2b+1)(2a+n+1)} {a}{a+n+1}
        sB = q^{-(2b+1)(2a+n+1)} [n+1] {b}{b+1}

    They satisfy d(A) sA = d(B) sB.
    """
    alpha = mpq(alpha)
    beta = mpq(beta)
    pre = cfg.q_power(-(2 * beta + 1) * (2 * alpha + n + 1))
    sA = pre * cfg.brace(alpha) * cfg.brace(alpha + n + 1)
    sB = pre * cfg.qint(n + 1) * cfg.brace(beta) * cfg.brace(beta + 1)
    return sA, sB
