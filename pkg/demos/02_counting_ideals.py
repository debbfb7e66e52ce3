"""
Counting ideals of bounded norm
===============================

a(n) = sum_{e | n} chi(e) is the number of ideals of norm n, and
S(X) = a(1) + ... + a(X) grows like X L(1, chi).  We sieve a(n), check the
sieve against the hyperbola method and scan the normalized error.
"""

from fractions import Fraction

from idealcount import (MainTerm, convolution_values, hyperbola_point,
                        quadratic_character, scan_error)

chi = quadratic_character(-1)
a = convolution_values(chi, 30)
print("a(1..30) =", a[1:].tolist())

# an independent O(sqrt X) count agrees with the sieve
S = a.cumsum()
print("S(30) sieve:", int(S[30]), " hyperbola:", hyperbola_point(chi, 30))

# sup over real X in [1, 1e6] of |S(X) - pi X/4| / X^(1/4)
rep = scan_error(chi, 10**6, Fraction(1, 4), MainTerm.for_character(chi, secondary=False),
                 claimed_constant=2.08)
print(f"worst ratio {rep.worst_ratio:.4f} at X={rep.worst_x:g} ({rep.worst_side}), verdict {rep.verdict}")

# records of the running maximum, the first few
for row in rep.records[:6]:
    print("  X=%-8s S=%-6d error=%+.4f ratio=%.4f" % (row[0], row[1], row[3], row[4]))
