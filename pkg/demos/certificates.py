"""How a quotient singularity gets its verdict.

Cheap certificates come first: a weight subset summing to a multiple of
r proves canonical, two disjoint copies of one prove terminal.  The
direct loop over the group settles the rest when it fits the budget.
The last example is the base-locus singularity of the terminal
Calabi-Yau 8-fold, where no proper subset helps.
"""

from wphyper.families import terminal_cy_base_singularity
from wphyper.singularities import QuotientSingularity, classify

CASES = [
    QuotientSingularity(5, (3, 2)),
    QuotientSingularity(11, (6, 5)),
    QuotientSingularity(11, (6, 5, 1)),
    QuotientSingularity(2, (1, 1, 1, 1)),
    QuotientSingularity(7, (3, 3, 4, 4)),
    QuotientSingularity(5, (1, 1)),
    terminal_cy_base_singularity(3),
]

for sing in CASES:
    for budget in (0, 10**7):
        v = classify(sing, budget=budget)
        shown = ", ".join(
            c.kind.value + (f"{list(map(list, c.subsets))}" if c.subsets else "")
            + (f" min={c.minimum}" if c.minimum is not None else "")
            for c in v.certificates
        )
        label = "certificates only" if budget == 0 else "with direct loop "
        print(f"{str(sing):32} {label}  {v.kind.value:24} {shown}")
    print()
