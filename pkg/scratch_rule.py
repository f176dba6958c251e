import random
import time

from gmpy2 import mpq

from qsl21.charb import grading_slice, hom_dim_quotient
from qsl21.repmod import SimpleLabel, build_typical, tensor
from qsl21.scalar import RootConfig, rat_mod
from qsl21.sixjtv import SixJCache

random.seed(11)


def check_product(cfg, cache, i, j):
    ruled = cache.channels(i, j)
    g = rat_mod(i.grading() + j.grading(), 1)
    if 2 * rat_mod(g, 1) == 0 or (2 * rat_mod(g, 1)) == 1:
        return None
    prod = tensor(build_typical(cfg, i), build_typical(cfg, j))
    sl = grading_slice(cfg, g)
    true = {}
    for lab in sl.labels:
        d = hom_dim_quotient(build_typical(cfg, lab), prod)
        if d:
            true[lab] = d
    ok = true == {k: v for k, v in ruled.items()}
    return ok, true, ruled


def run(l, B, trials):
    cfg = RootConfig(l, B)
    cache = SixJCache(cfg)
    bad = 0
    for t in range(trials):
        m_ = random.randrange(0, cfg.lPrime - 1)
        n_ = random.randrange(0, cfg.lPrime - 1)
        a = mpq(random.randrange(1, l * B), B)
        b = mpq(random.randrange(1, l * B), B)
        i = SimpleLabel.reduced(l, m_, a)
        j = SimpleLabel.reduced(l, n_, b)
        if not (i.is_generic() and j.is_generic()):
            continue
        res = check_product(cfg, cache, i, j)
        if res is None:
            continue
        ok, true, ruled = res
        tag = "ok" if ok else "MISMATCH"
        over = m_ + n_ - (cfg.lPrime - 1)
        print(f"l={l} ({i.n},{i.alphaTilde})x({j.n},{j.alphaTilde}) overshoot={over} {tag}")
        if not ok:
            bad += 1
            print("  true:", sorted((str(k), v) for k, v in true.items()))
            print("  rule:", sorted((str(k), v) for k, v in ruled.items()))
    return bad


t0 = time.time()
# the exact triple that fired the assert
cfg5 = RootConfig(5, 5)
cache5 = SixJCache(cfg5)
i0 = SimpleLabel.reduced(5, 2, mpq(14, 5))
j0 = SimpleLabel.reduced(5, 3, mpq(3, 5))
ok, true, ruled = check_product(cfg5, cache5, i0, j0)
print("failing triple product:", "ok" if ok else "MISMATCH")
print("  true:", sorted((str(k), v) for k, v in true.items()))
print("  rule:", sorted((str(k), v) for k, v in ruled.items()))

bad = run(5, 5, 18)
bad += run(3, 5, 10)
bad += run(3, 7, 8)
print("total mismatches:", bad, "elapsed", round(time.time() - t0, 1))
