"""Weight modules over quantum sl(2|1) with exact generator matrices.

A module is stored as eight sparse matrices (one per generator), a parity
list and a list of raw h-weight pairs (K_i acts diagonally by q to those
exponents).  Tensor products and duals carry the Koszul signs explicitly.
"""
from __future__ import annotations

from gmpy2 import mpq

from .linalg import Mat, rank, rref
from .scalar import Cyc, RootConfig, rat_mod

GENERATORS = ("K1", "K1inv", "K2", "K2inv", "E1", "E2", "F1", "F2")

#: algebra parity of each generator (E2, F2 are odd)
GEN_PARITY = {g: (1 if g in ("E2", "F2") else 0) for g in GENERATORS}

_CARTAN = {(1, 1): 2, (1, 2): -1, (2, 1): -1, (2, 2): 0}


class SimpleLabel:
    """Isomorphism-class label (n, alphaTilde), alphaTilde a rational mod l."""

    __slots__ = ("n", "alphaTilde")

    def __init__(self, n: int, alphaTilde):
        self.n = int(n)
        self.alphaTilde = mpq(alphaTilde)

    @staticmethod
    def reduced(l: int, n: int, alpha) -> SimpleLabel:
        return SimpleLabel(n, rat_mod(alpha, l))

    def dual_label(self, l: int) -> SimpleLabel:
        return SimpleLabel.reduced(l, self.n, -self.alphaTilde - self.n - 1)

    def grading(self) -> mpq:
        return rat_mod(self.alphaTilde, 1)

    def is_generic(self) -> bool:
        """True when the class of alphaTilde mod 1 avoids 0 and 1/2."""
        g = self.grading()
        return g != 0 and g != mpq(1, 2)

    def __eq__(self, other):
        return (
            isinstance(other, SimpleLabel)
            and self.n == other.n
            and self.alphaTilde == other.alphaTilde
        )

    def __hash__(self):
        return hash((self.n, self.alphaTilde))

    def __lt__(self, other):
        return (self.n, self.alphaTilde) < (other.n, other.alphaTilde)

    def __repr__(self):
        return f"({self.n},{self.alphaTilde})"

    def to_obj(self) -> dict:
        return {"n": self.n, "alphaTilde": str(self.alphaTilde)}

    @staticmethod
    def from_obj(obj: dict) -> SimpleLabel:
        return SimpleLabel(int(obj["n"]), mpq(obj["alphaTilde"]))


class WeightModule:
    """Finite-dimensional weight supermodule given by exact generator matrices."""

    __slots__ = (
        "cfg", "dim", "parity", "hWeights", "action", "provenance",
        "factors", "basisNames", "label",
    )

    def __init__(self, cfg: RootConfig, dim: int, parity: list[int],
                 hWeights: list[tuple], action: dict[str, Mat],
                 provenance: str = "", factors=None, basisNames=None,
                 label: SimpleLabel | None = None):
        assert len(parity) == dim and len(hWeights) == dim
        assert set(action) == set(GENERATORS)
        self.cfg = cfg
        self.dim = dim
        self.parity = parity
        self.hWeights = [(mpq(a), mpq(b)) for a, b in hWeights]
        self.action = action
        self.provenance = provenance
        self.factors = factors
        self.basisNames = basisNames
        self.label = label

    def grading(self) -> mpq:
        """Class of the second h-weight mod 1 (constant across the module)."""
        if self.dim == 0:
            return mpq(0)
        g = rat_mod(self.hWeights[0][1], 1)
        for _, h2 in self.hWeights:
            if rat_mod(h2, 1) != g:
                raise ValueError("module is not homogeneous for the mod-1 grading")
        return g

    def weight_blocks(self) -> dict:
        """Indices grouped by (h1 mod l, h2 mod l); equal keys mean equal K-action."""
        l = self.cfg.l
        blocks: dict[tuple, list[int]] = {}
        for i, (h1, h2) in enumerate(self.hWeights):
            blocks.setdefault((rat_mod(h1, l), rat_mod(h2, l)), []).append(i)
        return blocks

    def __repr__(self):
        return f"WeightModule({self.provenance}, dim={self.dim})"

    def to_obj(self) -> dict:
        obj = {
            "l": self.cfg.l,
            "denomBound": self.cfg.denomBound,
            "dim": self.dim,
            "parities": list(self.parity),
            "hWeights": [[str(a), str(b)] for a, b in self.hWeights],
            "action": {
                g: [[self.action[g].get(i, j).to_obj() for j in range(self.dim)]
                    for i in range(self.dim)]
                for g in GENERATORS
            },
            "provenance": self.provenance,
        }
        if self.label is not None:
            obj["label"] = self.label.to_obj()
        return obj

    @staticmethod
    def from_obj(obj: dict) -> WeightModule:
        cfg = RootConfig(int(obj["l"]), int(obj["denomBound"]))
        dim = int(obj["dim"])
        action = {}
        for g in GENERATORS:
            rows = obj["action"][g]
            d = {}
            for i in range(dim):
                for j in range(dim):
                    v = Cyc.from_obj(rows[i][j])
                    if not v.is_zero():
                        d[(i, j)] = v
            action[g] = Mat(dim, dim, cfg.N, d)
        label = SimpleLabel.from_obj(obj["label"]) if "label" in obj else None
        return WeightModule(
            cfg, dim, [int(p) for p in obj["parities"]],
            [(mpq(a), mpq(b)) for a, b in obj["hWeights"]],
            action, provenance=obj.get("provenance", ""), label=label,
        )


def typical_index(n: int, rho: int, sigma: int, p: int) -> int:
    """Position of basis vector (rho, sigma, p) in lexicographic order."""
    return (rho * 2 + sigma) * (n + 1) + p


def build_typical(cfg: RootConfig, label) -> WeightModule:
    """Simple module of dimension 4(n+1) with highest weight (n, alpha).

    label is a SimpleLabel or an (n, alpha) pair; alpha is kept as the
    given representative (matrices only depend on it mod l).  Rejects
    parameters where a required bracket [alpha] or [alpha+n+1] vanishes.
    """
    if isinstance(label, SimpleLabel):
        n, alpha = label.n, label.alphaTilde
    else:
        n, alpha = label
        alpha = mpq(alpha)
    n = int(n)
    if not 0 <= n <= cfg.lPrime - 1:
        raise ValueError(f"n={n} outside 0..{cfg.lPrime - 1}")
    for x in (alpha, alpha + n + 1):
        if rat_mod(2 * x, cfg.l) == 0:
            raise ValueError(f"bracket [{x}] vanishes; module would not be simple")
    dim = 4 * (n + 1)
    names = []
    parity = []
    hW = []
    k1 = {}
    k1i = {}
    k2 = {}
    k2i = {}
    e1 = {}
    e2 = {}
    f1 = {}
    f2 = {}
    for rho in (0, 1):
        for sigma in (0, 1):
            for p in range(n + 1):
                j = typical_index(n, rho, sigma, p)
                names.append((rho, sigma, p))
                parity.append((rho + sigma) % 2)
                h1 = mpq(rho - sigma + n - 2 * p)
                h2 = alpha + sigma + p
                hW.append((h1, h2))
                k1[(j, j)] = cfg.q_power(h1)
                k1i[(j, j)] = cfg.q_power(-h1)
                k2[(j, j)] = cfg.q_power(h2)
                k2i[(j, j)] = cfg.q_power(-h2)
                if p + 1 <= n:
                    f1[(typical_index(n, rho, sigma, p + 1), j)] = cfg.q_power(sigma - rho)
                if rho == 1 and sigma == 0:
                    f1[(typical_index(n, 0, 1, p), j)] = -cfg.q_power(-1)
                if rho == 0:
                    f2[(typical_index(n, 1, sigma, p), j)] = cfg.one()
                if sigma == 1 and rho == 0:
                    e1[(typical_index(n, 1, 0, p), j)] = -cfg.q_power(n - 2 * p + 1)
                if p >= 1:
                    e1[(typical_index(n, rho, sigma, p - 1), j)] = (
                        cfg.qint(p) * cfg.qint(n - p + 1)
                    )
                if rho == 1:
                    e2[(typical_index(n, 0, sigma, p), j)] = cfg.qint(alpha + p + sigma)
                if sigma == 1 and p + 1 <= n:
                    c = cfg.q_power(-alpha - p)
                    e2[(typical_index(n, rho, 0, p + 1), j)] = -c if rho else c
    action = {
        "K1": Mat(dim, dim, cfg.N, k1),
        "K1inv": Mat(dim, dim, cfg.N, k1i),
        "K2": Mat(dim, dim, cfg.N, k2),
        "K2inv": Mat(dim, dim, cfg.N, k2i),
        "E1": Mat(dim, dim, cfg.N, e1),
        "E2": Mat(dim, dim, cfg.N, e2),
        "F1": Mat(dim, dim, cfg.N, f1),
        "F2": Mat(dim, dim, cfg.N, f2),
    }
    return WeightModule(
        cfg, dim, parity, hW, action,
        provenance=f"V({n},{alpha})", basisNames=names,
        label=SimpleLabel.reduced(cfg.l, n, alpha),
    )


def trivial_module(cfg: RootConfig) -> WeightModule:
    """One-dimensional module where generators act through the counit."""
    one = Mat.identity(1, cfg.N)
    zero = Mat(1, 1, cfg.N, {})
    action = {
        "K1": one, "K1inv": one.copy(), "K2": one.copy(), "K2inv": one.copy(),
        "E1": zero, "E2": zero.copy(), "F1": zero.copy(), "F2": zero.copy(),
    }
    return WeightModule(cfg, 1, [0], [(mpq(0), mpq(0))], action, provenance="C")


def _kron(A: Mat, B: Mat, bParity: int, parity1: list[int], N: int) -> Mat:
    """Matrix of a (x) b on the tensor basis, with b of algebra parity bParity.

    (a (x) b)(v_i (x) w_j) = (-1)^(|b||v_i|) a v_i (x) b w_j.
    """
    d2r, d2c = B.rows, B.cols
    out = {}
    for (ip, i), a in A.d.items():
        sign = -1 if (bParity and parity1[i] % 2) else 1
        for (jp, j), b in B.d.items():
            v = a * b
            out[(ip * d2r + jp, i * d2c + j)] = -v if sign < 0 else v
    return Mat(A.rows * B.rows, A.cols * B.cols, N, out)


def tensor(M1: WeightModule, M2: WeightModule) -> WeightModule:
    """Tensor product module via the coproduct, with Koszul signs."""
    if M1.cfg.l != M2.cfg.l or M1.cfg.N != M2.cfg.N:
        raise ValueError("tensor factors use different root configurations")
    cfg = M1.cfg
    d1, d2 = M1.dim, M2.dim
    dim = d1 * d2
    parity = []
    hW = []
    for i in range(d1):
        for j in range(d2):
            parity.append((M1.parity[i] + M2.parity[j]) % 2)
            hW.append((M1.hWeights[i][0] + M2.hWeights[j][0],
                       M1.hWeights[i][1] + M2.hWeights[j][1]))
    a1, a2 = M1.action, M2.action
    par1 = M1.parity
    N = cfg.N
    id1 = Mat.identity(d1, N)
    id2 = Mat.identity(d2, N)
    action = {}
    for k in ("K1", "K1inv", "K2", "K2inv"):
        action[k] = _kron(a1[k], a2[k], 0, par1, N)
    for i in ("1", "2"):
        gp = GEN_PARITY["E" + i]
        action["E" + i] = (
            _kron(a1["E" + i], id2, 0, par1, N)
            + _kron(a1["K" + i + "inv"], a2["E" + i], gp, par1, N)
        )
        action["F" + i] = (
            _kron(a1["F" + i], a2["K" + i], 0, par1, N)
            + _kron(id1, a2["F" + i], gp, par1, N)
        )
    return WeightModule(
        cfg, dim, parity, hW, action,
        provenance=f"({M1.provenance})(x)({M2.provenance})",
        factors=(M1, M2),
    )


def antipode_matrices(M: WeightModule) -> dict[str, Mat]:
    """Matrices of S(x) on M for each generator x."""
    a = M.action
    return {
        "K1": a["K1inv"], "K1inv": a["K1"],
        "K2": a["K2inv"], "K2inv": a["K2"],
        "E1": -(a["K1"] @ a["E1"]),
        "E2": -(a["K2"] @ a["E2"]),
        "F1": -(a["F1"] @ a["K1inv"]),
        "F2": -(a["F2"] @ a["K2inv"]),
    }


def dual(M: WeightModule) -> WeightModule:
    """Dual module on the dual basis: (x.f)(v) = (-1)^(|x||f|) f(S(x) v)."""
    cfg = M.cfg
    S = antipode_matrices(M)
    action = {}
    for g in GENERATORS:
        gp = GEN_PARITY[g]
        d = {}
        for (b, a), v in S[g].d.items():
            d[(a, b)] = -v if (gp and M.parity[b] % 2) else v
        action[g] = Mat(M.dim, M.dim, cfg.N, d)
    return WeightModule(
        cfg, M.dim, list(M.parity),
        [(-h1, -h2) for h1, h2 in M.hWeights],
        action, provenance=f"dual({M.provenance})",
        label=M.label.dual_label(cfg.l) if M.label is not None else None,
    )


def verify_relations(M: WeightModule) -> list[tuple[str, bool]]:
    """Evaluate the defining relations as exact matrix identities.

    Returns [(relation, holds)] covering the K-group, the K-E and K-F
    conjugations, the four (anti)commutators between E_i and F_j with
    signs for the odd pair, both Serre relations, squares of the odd
    generators, and consistency of the stored weights and parities.
    """
    cfg = M.cfg
    a = M.action
    K1, K1i, K2, K2i = a["K1"], a["K1inv"], a["K2"], a["K2inv"]
    E1, E2, F1, F2 = a["E1"], a["E2"], a["F1"], a["F2"]
    n = M.dim
    I = Mat.identity(n, cfg.N)
    qq = cfg.q_power(1) + cfg.q_power(-1)
    b1 = cfg.brace(1)
    rep = []
    rep.append(("K1 K1inv = 1", (K1 @ K1i) == I))
    rep.append(("K2 K2inv = 1", (K2 @ K2i) == I))
    rep.append(("K1 K2 = K2 K1", (K1 @ K2) == (K2 @ K1)))
    Ks = {1: (K1, K1i), 2: (K2, K2i)}
    Es = {1: E1, 2: E2}
    Fs = {1: F1, 2: F2}
    for i in (1, 2):
        Ki, Kii = Ks[i]
        for j in (1, 2):
            cij = _CARTAN[(i, j)]
            rep.append((
                f"K{i} E{j} K{i}inv = q^{cij} E{j}",
                (Ki @ Es[j] @ Kii) == Es[j].scale(cfg.q_power(cij)),
            ))
            rep.append((
                f"K{i} F{j} K{i}inv = q^{-cij} F{j}",
                (Ki @ Fs[j] @ Kii) == Fs[j].scale(cfg.q_power(-cij)),
            ))
    rep.append((
        "(E1 F1 - F1 E1) {1} = K1 - K1inv",
        (E1 @ F1 - F1 @ E1).scale(b1) == (K1 - K1i),
    ))
    rep.append((
        "(E2 F2 + F2 E2) {1} = K2 - K2inv",
        (E2 @ F2 + F2 @ E2).scale(b1) == (K2 - K2i),
    ))
    rep.append(("E1 F2 = F2 E1", (E1 @ F2) == (F2 @ E1)))
    rep.append(("E2 F1 = F1 E2", (E2 @ F1) == (F1 @ E2)))
    rep.append((
        "E1^2 E2 - (q + 1/q) E1 E2 E1 + E2 E1^2 = 0",
        (E1 @ E1 @ E2 - (E1 @ E2 @ E1).scale(qq) + E2 @ E1 @ E1).is_zero(),
    ))
    rep.append((
        "F1^2 F2 - (q + 1/q) F1 F2 F1 + F2 F1^2 = 0",
        (F1 @ F1 @ F2 - (F1 @ F2 @ F1).scale(qq) + F2 @ F1 @ F1).is_zero(),
    ))
    rep.append(("E2 E2 = 0", (E2 @ E2).is_zero()))
    rep.append(("F2 F2 = 0", (F2 @ F2).is_zero()))
    diag1 = Mat(n, n, cfg.N, {(i, i): cfg.q_power(M.hWeights[i][0]) for i in range(n)})
    diag2 = Mat(n, n, cfg.N, {(i, i): cfg.q_power(M.hWeights[i][1]) for i in range(n)})
    rep.append(("K1 = diag(q^h1)", K1 == diag1))
    rep.append(("K2 = diag(q^h2)", K2 == diag2))
    okp = True
    for g in GENERATORS:
        gp = GEN_PARITY[g]
        for (i, j), v in a[g].d.items():
            if (M.parity[i] - M.parity[j] - gp) % 2 and not v.is_zero():
                okp = False
    rep.append(("generators are parity homogeneous", okp))
    return rep


def relations_all_pass(report: list[tuple[str, bool]]) -> bool:
    return all(ok for _, ok in report)


def _mat_power(A: Mat, k: int) -> Mat:
    out = Mat.identity(A.rows, A.N)
    for _ in range(k):
        out = out @ A
    return out


def nilpotency_check(M: WeightModule) -> list[tuple[str, bool]]:
    """Check that E1 and F1 raised to l' act by zero."""
    lp = M.cfg.lPrime
    return [
        (f"E1^{lp} = 0", _mat_power(M.action["E1"], lp).is_zero()),
        (f"F1^{lp} = 0", _mat_power(M.action["F1"], lp).is_zero()),
    ]


def _row_homogeneity(M: WeightModule, row: dict[int, Cyc]) -> tuple:
    """Common (parity, h1 mod l, h2 mod l) of a row's support, or raise."""
    l = M.cfg.l
    key = None
    for i in row:
        k = (M.parity[i], rat_mod(M.hWeights[i][0], l), rat_mod(M.hWeights[i][1], l))
        if key is None:
            key = k
        elif key != k:
            raise ValueError("generating vector is not weight and parity homogeneous")
    return key


def submodule_generated(M: WeightModule, vectors) -> tuple[Mat, WeightModule]:
    """Smallest submodule containing the given column vectors.

    Returns (B, S): columns of B are an echelonized basis, S the induced
    module on that basis.  Raises when the closure's echelon basis fails
    to be parity and weight homogeneous, since the induced module then
    has no consistent weight data.
    """
    if isinstance(vectors, Mat):
        vectors = [vectors.column(j) for j in range(vectors.cols)]
    cfg = M.cfg
    dim = M.dim
    rows = Mat(0, dim, cfg.N, {})
    for v in vectors:
        assert v.rows == dim and v.cols == 1
        rows = _vstack(rows, v.transpose())
    R, piv = rref(rows)
    while True:
        cur = Mat(len(piv), dim, cfg.N,
                  {(i, j): v for (i, j), v in R.d.items() if i < len(piv)})
        curT = cur.transpose()
        stacked = cur
        for g in GENERATORS:
            G = M.action[g]
            for k in range(len(piv)):
                stacked = _vstack(stacked, (G @ curT.column(k)).transpose())
        R2, piv2 = rref(stacked)
        grew = len(piv2) > len(piv)
        R, piv = R2, piv2
        if not grew:
            break
    r = len(piv)
    basis = Mat(dim, r, cfg.N, {(j, i): v for (i, j), v in R.d.items() if i < r})
    rowsupp = [dict() for _ in range(r)]
    for (i, j), v in R.d.items():
        if i < r:
            rowsupp[i][j] = v
    keys = [_row_homogeneity(M, rowsupp[k]) for k in range(r)]
    parity = [k[0] for k in keys]
    hW = [(M.hWeights[piv[k]][0], M.hWeights[piv[k]][1]) for k in range(r)]
    action = {}
    for g in GENERATORS:
        G = M.action[g]
        d = {}
        for k in range(r):
            img = G @ basis.column(k)
            # coordinates read off the pivot entries of the rref basis
            coeffs = {j: img.get(piv[j], 0) for j in range(r)}
            resid = img
            for j, c in coeffs.items():
                if not c.is_zero():
                    resid = resid - basis.column(j).scale(c)
                    d[(j, k)] = c
            if not resid.is_zero():
                raise ValueError("closure failed; generated space is not invariant")
        action[g] = Mat(r, r, cfg.N, d)
    sub = WeightModule(
        cfg, r, parity, hW, action,
        provenance=f"submodule({M.provenance})",
    )
    return basis, sub


def _vstack(A: Mat, B: Mat) -> Mat:
    assert A.cols == B.cols or A.rows == 0
    cols = B.cols if A.rows == 0 else A.cols
    d = dict(A.d)
    for (i, j), v in B.d.items():
        d[(i + A.rows, j)] = v
    return Mat(A.rows + B.rows, cols, A.N if A.rows else B.N, d)
