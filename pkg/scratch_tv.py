import json
import sys
import time

sys.path.insert(0, "tests")

from tv_oracle import tv_brute_force

from qsl21.sixjtv import HTriangulationData, SixJCache, tv_state_sum

with open("fixtures/doubled_tetrahedron.json") as fh:
    tri = HTriangulationData.from_obj(json.load(fh))

cache = SixJCache(tri.cfg)

t0 = time.time()
got = tv_state_sum(tri, cache=cache)
t1 = time.time()
print(f"tv_state_sum {t1-t0:.1f}s states={got['stateCount']} nonzero={got['nonzeroStates']}")
print("value:", json.dumps(got["value"].to_obj()))
print("canon:", got["value"].canon().to_obj())

oracle = tv_brute_force(tri, cache=cache)
t2 = time.time()
print(f"oracle {t2-t1:.1f}s states={oracle['stateCount']} nonzero={oracle['nonzeroStates']}")
print("match:", got["value"] == oracle["value"])

shift = {"0": "1/5", "1": "4/5", "2": "3/5", "3": "3/5", "4": "2/5", "5": "4/5"}
got2 = tv_state_sum(tri, cocycle=shift, cache=cache)
t3 = time.time()
print(f"coboundary run {t3-t2:.1f}s states={got2['stateCount']} nonzero={got2['nonzeroStates']}")
print("coboundary invariant:", got2["value"] == got["value"])
print("value2:", json.dumps(got2["value"].to_obj()))
