import random
import time

from qsl21.scalar import RootConfig
from qsl21.sixjtv import SixJCache, pachner23_check, random_pachner_case

for l, B, count, seed in ((3, 5, 6, 7), (5, 5, 5, 3)):
    cfg = RootConfig(l, B)
    cache = SixJCache(cfg)
    rng = random.Random(seed)
    t0 = time.time()
    done = 0
    while done < count:
        case = random_pachner_case(cfg, rng, cache=cache)
        if case is None:
            continue
        res = pachner23_check(cfg, *case, cache=cache)
        assert res["match"], (l, case)
        done += 1
        print(f"l={l} case {done} ok internal={res['internal']} t={time.time()-t0:.1f}s")
    # one mutation check per l
    rng2 = random.Random(seed + 100)
    case = None
    while case is None:
        case = random_pachner_case(cfg, rng2, cache=cache)
    bad = pachner23_check(cfg, *case, cache=cache, mutate_d=True)
    print(f"l={l} mutated match={bad['match']} (want False) total={time.time()-t0:.1f}s")
