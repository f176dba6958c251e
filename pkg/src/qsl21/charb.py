"""Specialized characters, the slice pairing constant, and the b weight map.

chi_q evaluates the character of a simple labeled module at the root of
unity; it depends only on the integer part of the label.  The constant D
normalizes chi into the weight map b used by the state sum.  Quotient Hom
dimensions are always computed through the trace pairing rank, so labels
sitting inside non-split summands are counted correctly.
"""
from __future__ import annotations

from gmpy2 import mpq

from .catops import decompose, negligible_rank
from .mtrace import ModifiedDimensionTable
from .repmod import SimpleLabel, WeightModule, build_typical, tensor
from .scalar import Cyc, RootConfig, rat_mod


def chi_q(cfg: RootConfig, m: int) -> Cyc:
    """(2 + q + q^-1) [m+1] for 0 <= m <= l'-1; vanishes at m = l'-1."""
    if not 0 <= m <= cfg.lPrime - 1:
        raise ValueError(f"character index {m} outside 0..{cfg.lPrime - 1}")
    c = cfg.rat(2) + cfg.q_power(1) + cfg.q_power(-1)
    return c * cfg.qint(m + 1)


def curly_d(cfg: RootConfig) -> Cyc:
    """Closed form -2 l'^2 (2+q+q^-1)^2 / (q-q^-1)^2."""
    c = cfg.rat(2) + cfg.q_power(1) + cfg.q_power(-1)
    num = c * c * (-2 * cfg.lPrime * cfg.lPrime)
    return num * (cfg.brace(1) * cfg.brace(1)).inverse()


def curly_d_report(cfg: RootConfig) -> dict:
    """Closed form next to the honest sum over all l lifts of a slice.

    The sum enumerates chi_q(m)^2 over every lift, so for even l it is
    twice the closed form; the match flag records the comparison.
    """
    closed = curly_d(cfg)
    total = Cyc.zero(cfg.N)
    for _ in range(cfg.l):
        for m in range(cfg.lPrime):
            v = chi_q(cfg, m)
            total = total + v * v
    return {"closed": closed, "liftSum": total, "match": total == closed}


def b_map(cfg: RootConfig, label) -> Cyc:
    """chi_q(n) / D for a generic label with n <= l'-2."""
    if not isinstance(label, SimpleLabel):
        n, a = label
        label = SimpleLabel.reduced(cfg.l, n, a)
    if not label.is_generic():
        raise ValueError(f"label {label} is not generic")
    if not 0 <= label.n <= cfg.lPrime - 2:
        raise ValueError(f"label {label} lies outside the representative alcove")
    return chi_q(cfg, label.n) * curly_d(cfg).inverse()


class GradingSlice:
    """All representative labels over one generic grading class."""

    __slots__ = ("g", "lifts", "labels")

    def __init__(self, g, lifts, labels):
        self.g = g
        self.lifts = lifts
        self.labels = labels

    def __repr__(self):
        return f"GradingSlice(g={self.g}, {len(self.labels)} labels)"


def grading_slice(cfg: RootConfig, g) -> GradingSlice:
    """Slice of grading g: l lifts, labels with 0 <= n <= l'-2."""
    g = rat_mod(mpq(g), 1)
    if rat_mod(2 * g, 1) == 0:
        raise ValueError(f"grading {g} is not generic")
    lifts = [g + j for j in range(cfg.l)]
    labels = [
        SimpleLabel(n, a) for n in range(cfg.lPrime - 1) for a in lifts
    ]
    assert len(lifts) == cfg.l
    return GradingSlice(g, lifts, labels)


def hom_dim_quotient(V: WeightModule, M: WeightModule) -> int:
    """Dimension of Hom(V, M) in the purified category (pairing rank)."""
    total, negligible = negligible_rank(V, M)
    return total - negligible


def _module_cache(cfg: RootConfig):
    memo: dict[SimpleLabel, WeightModule] = {}

    def get(label: SimpleLabel) -> WeightModule:
        got = memo.get(label)
        if got is None:
            got = memo[label] = build_typical(cfg, label)
        return got

    return get


def _quotient_dims(get, lab1: SimpleLabel, lab2: SimpleLabel, targets) -> dict:
    """Quotient Hom dimensions of every target label inside V1 (x) V2.

    When the product splits completely the summand labels answer all
    targets at once; otherwise each target falls back to the pairing rank.
    The n-sum heuristic only skips a split attempt that cannot succeed.
    """
    T = tensor(get(lab1), get(lab2))
    cfg = T.cfg
    if lab1.n + lab2.n <= cfg.lPrime - 2:
        rec = decompose(T)
        if rec.complete:
            counts = rec.label_multiset()
            return {lab: counts.get(lab, 0) for lab in targets}
    return {lab: hom_dim_quotient(get(lab), T) for lab in targets}


def verify_b_identity(cfg: RootConfig, g1, g2) -> list[tuple[SimpleLabel, bool]]:
    """Check b(V) = sum b(V1) b(V2) dim Hom(V, V1 (x) V2) over two slices.

    V runs over the slice of g1+g2; V1, V2 over the slices of g1 and g2.
    Hom dimensions are quotient dimensions.  Returns one verdict per V.
    """
    s1 = grading_slice(cfg, g1)
    s2 = grading_slice(cfg, g2)
    target = grading_slice(cfg, rat_mod(mpq(g1) + mpq(g2), 1))
    get = _module_cache(cfg)
    sums = {lab: Cyc.zero(cfg.N) for lab in target.labels}
    pair_dims: dict[tuple, dict] = {}
    for lab1 in s1.labels:
        for lab2 in s2.labels:
            key = tuple(sorted(((lab1.n, lab1.alphaTilde), (lab2.n, lab2.alphaTilde))))
            dims = pair_dims.get(key)
            if dims is None:
                dims = pair_dims[key] = _quotient_dims(get, lab1, lab2, target.labels)
            weight = b_map(cfg, lab1) * b_map(cfg, lab2)
            for lab, d in dims.items():
                if d:
                    sums[lab] = sums[lab] + weight * d
    return [(lab, sums[lab] == b_map(cfg, lab)) for lab in target.labels]


def verify_chi_multiplicativity(cfg: RootConfig, m: int, alphaTilde, n: int, betaTilde) -> bool:
    """chi_q(m) chi_q(n) = sum over labels of dim Hom(V(k), product) chi_q(k)."""
    lab1 = SimpleLabel.reduced(cfg.l, m, alphaTilde)
    lab2 = SimpleLabel.reduced(cfg.l, n, betaTilde)
    g = rat_mod(lab1.grading() + lab2.grading(), 1)
    if rat_mod(2 * g, 1) == 0:
        raise ValueError("product grading is not generic")
    get = _module_cache(cfg)
    rhs = Cyc.zero(cfg.N)
    dims = _quotient_dims(get, lab1, lab2, grading_slice(cfg, g).labels)
    for lab, d in dims.items():
        if d:
            rhs = rhs + chi_q(cfg, lab.n) * d
    return chi_q(cfg, m) * chi_q(cfg, n) == rhs


def tensor_reduction_multisets(cfg: RootConfig, m: int, alphaTilde, n: int, betaTilde):
    """Quotient label multisets of V(m,a)(x)V(n,b) and its rank-one reduction.

    The reduction rewrites the product as V(0,a) tensored with a ladder of
    V(n+m-2i, b+i) terms, dropping any term with integer part >= l'-1.
    Returns the two {label: multiplicity} dictionaries.
    """
    assert 0 <= m <= n <= cfg.lPrime - 2
    lab1 = SimpleLabel.reduced(cfg.l, m, alphaTilde)
    lab2 = SimpleLabel.reduced(cfg.l, n, betaTilde)
    g = rat_mod(lab1.grading() + lab2.grading(), 1)
    if rat_mod(2 * g, 1) == 0:
        raise ValueError("product grading is not generic")
    get = _module_cache(cfg)
    table = ModifiedDimensionTable(cfg)
    left = {}
    dims = _quotient_dims(get, lab1, lab2, grading_slice(cfg, g).labels)
    for lab, d in dims.items():
        if d:
            left[lab] = d
    right: dict[SimpleLabel, int] = {}
    for i in range(m + 1):
        k = n + m - 2 * i
        if k >= cfg.lPrime - 1:
            continue
        ladder = SimpleLabel.reduced(cfg.l, k, mpq(betaTilde) + i)
        rec = decompose(tensor(get(SimpleLabel(0, lab1.alphaTilde)), get(ladder)))
        assert rec.complete
        for lab in rec.labels():
            if not table.value(lab).is_zero():
                right[lab] = right.get(lab, 0) + 1
    return left, right


def char_table(cfg: RootConfig) -> dict:
    """Character and b values per integer label, plus the constant D."""
    report = curly_d_report(cfg)
    entries = []
    for m in range(cfg.lPrime):
        row = {"m": m, "chi": chi_q(cfg, m).to_obj()}
        if m <= cfg.lPrime - 2:
            row["bValue"] = (chi_q(cfg, m) * curly_d(cfg).inverse()).to_obj()
        entries.append(row)
    return {
        "l": cfg.l,
        "entries": entries,
        "curlyD": report["closed"].to_obj(),
        "liftSum": report["liftSum"].to_obj(),
        "liftSumMatches": report["match"],
    }
