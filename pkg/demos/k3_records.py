"""Records among quasi-smooth K3 hypersurfaces X_d in P(a0,a1,a2,a3), d = sum(a).

Prints the smallest volume and the largest bottom weight found with all
weights at most the given bound, together with every system attaining
each record.

    python demos/k3_records.py [max_weight] [workers]
"""

import sys
import time

from wphyper import RecordKind, SearchConfig, enumerate_cy_surfaces

bound = int(sys.argv[1]) if len(sys.argv) > 1 else 40
workers = int(sys.argv[2]) if len(sys.argv) > 2 else 1

for kind in RecordKind:
    start = time.perf_counter()
    r = enumerate_cy_surfaces(SearchConfig(bound, kind, workers))
    took = time.perf_counter() - start
    print(f"{kind.value}: {r.best} after {r.examined} systems ({took:.1f}s)")
    for a in r.achievers:
        print(f"   X_{sum(a)} in P{a}")
