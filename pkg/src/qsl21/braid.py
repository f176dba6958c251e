"""Braiding from the truncated R-matrix on h-weighted modules.

The braiding is tau (R K) where K is the diagonal Cartan factor built from
h-weight representatives, R is the finite truncated sum with the mixed root
vectors E3 = E1 E2 - q^{-1} E2 E1 and F3 = F2 F1 - q F1 F2, and tau is the
super flip.  The map depends on the chosen h2 representatives, so braiding()
takes them explicitly.
"""
from __future__ import annotations

from gmpy2 import mpq

from .linalg import Mat
from .repmod import WeightModule, _kron
from .scalar import Cyc


class BraidingMap:
    """Braiding c: M1 (x) M2 -> M2 (x) M1 plus the representatives used."""

    __slots__ = ("source1", "source2", "matrix", "reps")

    def __init__(self, source1, source2, matrix, reps):
        self.source1 = source1
        self.source2 = source2
        self.matrix = matrix
        self.reps = reps

    def __repr__(self):
        return f"BraidingMap({self.source1.dim}x{self.source2.dim}, reps={self.reps})"


def _k_diag(M1: WeightModule, M2: WeightModule, s1, s2) -> Mat:
    """Diagonal Cartan factor with h2 weights shifted by s1, s2."""
    cfg = M1.cfg
    out = Mat(M1.dim * M2.dim, M1.dim * M2.dim, cfg.N)
    for i, (l1, l2) in enumerate(M1.hWeights):
        l2 = l2 + s1
        for j, (m1, m2) in enumerate(M2.hWeights):
            m2 = m2 + s2
            k = i * M2.dim + j
            out.d[(k, k)] = cfg.q_power(-(l1 * m2 + l2 * m1 + 2 * l2 * m2))
    return out


def k_operator(M1: WeightModule, M2: WeightModule) -> Mat:
    """Diagonal operator q^{-h1 h2' - h2 h1' - 2 h2 h2'} on M1 (x) M2."""
    return _k_diag(M1, M2, mpq(0), mpq(0))


def truncated_r(M1: WeightModule, M2: WeightModule) -> Mat:
    """Truncated R-matrix acting on M1 (x) M2 (without the Cartan factor)."""
    cfg = M1.cfg
    dim = M1.dim * M2.dim
    a1 = M1.action
    a2 = M2.action
    qinv = cfg.q_power(-1)
    q1 = cfg.q_power(1)
    br1 = cfg.brace(1)
    e3 = a1["E1"] @ a1["E2"] - (a1["E2"] @ a1["E1"]).scale(qinv)
    f3 = a2["F2"] @ a2["F1"] - (a2["F1"] @ a2["F2"]).scale(q1)

    out = Mat(dim, dim, cfg.N)
    ek = Mat.identity(M1.dim, cfg.N)
    fk = Mat.identity(M2.dim, cfg.N)
    coef = Cyc.one(cfg.N)
    for k in range(cfg.lPrime):
        if k:
            ek = ek @ a1["E1"]
            fk = fk @ a2["F1"]
            coef = coef * br1 * cfg.qparen(k).inverse()
            if ek.is_zero() or fk.is_zero():
                break
        out = out + _kron(ek, fk, 0, M1.parity, cfg.N).scale(coef)
    idp = Mat.identity(dim, cfg.N)
    mid = idp - _kron(e3, f3, 1, M1.parity, cfg.N).scale(br1)
    right = idp - _kron(a1["E2"], a2["F2"], 1, M1.parity, cfg.N).scale(br1)
    return out @ mid @ right


def flip_map(M1: WeightModule, M2: WeightModule) -> Mat:
    """Super flip v (x) w -> (-1)^{|v||w|} w (x) v as a matrix."""
    cfg = M1.cfg
    out = Mat(M1.dim * M2.dim, M1.dim * M2.dim, cfg.N)
    one = Cyc.one(cfg.N)
    for i, p1 in enumerate(M1.parity):
        for j, p2 in enumerate(M2.parity):
            out.d[(j * M1.dim + i, i * M2.dim + j)] = -one if p1 and p2 else one
    return out


def braiding(M1: WeightModule, M2: WeightModule, reps=None) -> BraidingMap:
    """Braiding tau (R K): M1 (x) M2 -> M2 (x) M1.

    reps = (a, a') picks the h2-weight representatives of the two factors;
    each must lift the module's label exponent by a multiple of l.  With
    reps omitted the stored weights are used.
    """
    s1 = s2 = mpq(0)
    used = None
    if reps is not None:
        a1, a2 = mpq(reps[0]), mpq(reps[1])
        if M1.label is None or M2.label is None:
            raise ValueError("representative exponents need labeled simple factors")
        s1 = a1 - M1.label.alphaTilde
        s2 = a2 - M2.label.alphaTilde
        for s in (s1, s2):
            if (s / M1.cfg.l).denominator != 1:
                raise ValueError("representative must lift the label modulo l")
        used = (a1, a2)
    elif M1.label is not None and M2.label is not None:
        used = (M1.label.alphaTilde, M2.label.alphaTilde)
    mat = flip_map(M1, M2) @ (truncated_r(M1, M2) @ _k_diag(M1, M2, s1, s2))
    return BraidingMap(M1, M2, mat, used)
