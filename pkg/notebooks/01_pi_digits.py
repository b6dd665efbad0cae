"""
Digits of pi from the sextic series
===================================

Each series parameter r fixes a ratio J_r; every term adds about
-log10 J_r digits.  Large r converges fast.
"""
import mpmath

from ramapi.mpcore import PrecisionContext
from ramapi.piseries import compute_pi_detailed, series_params

ctx = PrecisionContext(40)

# digits per term for a few r
for r in (2, 4, 5, 8, 432, 1728):
    p = series_params(r, ctx)
    print(f"r={r:5d}  J={ctx.mp.nstr(p.J, 8):>14}  digits/term={ctx.mp.nstr(p.digits_per_term, 6)}")

# 500 digits at r = 1728 takes only a handful of terms
res = compute_pi_detailed(1728, 500)
print("terms used:", res.n_terms)

mpmath.mp.dps = 520
print("agrees with mpmath.pi:", abs(res.value - mpmath.pi) < mpmath.mpf(10) ** -500)
