"""
Quadratic characters and their L-values
=======================================

Each imaginary quadratic field Q[sqrt(d)] carries a character
chi(n) = (Delta/n).  Its partial sums stay bounded, and the largest of
them, Omega, controls every error term that follows.
"""

from idealcount import quadratic_character, SQUAREFREE_D_TO_19

# the Gaussian field: Delta = -4, chi = 1, 0, -1, 0, ...
chi = quadratic_character(-1)
print("Delta =", chi.delta, " first values:", [int(chi(n)) for n in range(1, 9)])

# L(0, chi) is rational (2h/w); L(1, chi) follows as pi L(0)/sqrt|Delta|
print("L(0) =", chi.l_at_zero, " L(1) =", chi.l_at_one, "(pi/4)")

# Omega for the fields used later on
for d in SQUAREFREE_D_TO_19:
    c = quadratic_character(d)
    print(f"d={d:4d}  Delta={c.delta:4d}  Omega={c.omega}  L(1)={c.l_at_one:.6f}")
