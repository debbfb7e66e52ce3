"""
The constants c(3/4), c(5/4) and C0(d)
======================================

c(3/4) and c(5/4) are suprema of normalized Dirichlet partial sums and
tails of a(n).  They are evaluated exactly up to M = 1e6 and capped beyond
that by explicit a priori bounds; C0(d) = L(1, chi) max(c(3/4), c(5/4))^(2/3).
This takes about ten seconds.
"""

from idealcount import reproduce_table

print(" d    Delta Omega  c(3/4)   c(5/4)   C0(d)    table")
for row in reproduce_table():
    print(f"{row.d:4d} {row.delta:6d} {row.omega:4d}  {row.c34.rigorous_cap:.5f}  "
          f"{row.c54.rigorous_cap:.5f}  {row.C0d:.5f}  {row.published:.2f}  {row.verdict}")

# over all M >= 1, rather than M >= 1e6, c(5/4) would be much larger
row = reproduce_table((-1,))[0]
print("\nd=-1: c(5/4) from M=1e6 on:", round(row.c54.rigorous_cap, 4),
      " over every M >= 1:", round(row.c54_sup, 4))
