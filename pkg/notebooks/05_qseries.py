"""
Eisenstein series and lattice sums
==================================

P, Q, R at q = exp(-2 pi sqrt r), the j-invariant they imply,
and a coarse float64 lattice sum for comparison.
"""
from ramapi.mpcore import PrecisionContext
from ramapi.qseries import eisenstein_triple, lattice_g2

ctx = PrecisionContext(40)
nstr = ctx.mp.nstr

for r in (1, 2, 3, 4, 7):
    e = eisenstein_triple(r, ctx)
    print(f"r={r}  Q={nstr(e.Q, 12)}  R={nstr(e.R, 12)}  j={nstr(e.j, 15)}")

# float64 lattice sums have an O(M^-2) tail; watch g2 settle at tau = i
g2 = 60 * eisenstein_triple(1, ctx).Q * (2 * ctx.pi) ** 4 / 720
for M in (25, 50, 100, 200):
    approx = lattice_g2(1j, M, ctx)
    print(f"M={M:4d}  rel err {abs(float(approx) / float(g2) - 1):.2e}")
