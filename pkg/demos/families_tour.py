"""Walk through the Sylvester families in low dimension.

For each problem the smallest few members are generated, classified, and
compared with what the construction promises.  Volumes are printed exactly
and approximately; the last column is the double exponential bound when
one is claimed in that dimension.

    python demos/families_tour.py [max_dim]
"""

import sys

from wphyper import ProblemId, approx, classify_hypersurface, generate
from wphyper.families import DimensionError, check_member


def main(max_dim: int = 5) -> None:
    for p in ProblemId:
        print(f"== {p.value}: {p.expected_class}, {p.expected_singularity.value}, goal {p.goal}")
        for n in range(1, max_dim + 1):
            try:
                m = generate(p, n)
            except DimensionError:
                continue
            rep = classify_hypersurface(m.hypersurface)
            check = check_member(m, rep)
            bound = "" if m.bound is None else f"  {m.bound.statement}: {'holds' if check.bound else 'FAILS'}"
            print(
                f"  n={n:<2} {m.hypersurface}\n"
                f"       vol {rep.volume} (~{approx(rep.volume)}), M = {rep.M}, "
                f"{rep.overall.kind.value} [{check.singularity}]{bound}"
            )


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 5)
