"""
Singular moduli for small r
===========================

Elliptic m_r, cubic alpha_r and sextic beta_r, with the
elliptic alpha function a(r).
"""
from ramapi.mpcore import PrecisionContext
from ramapi.moduli import modulus_record

ctx = PrecisionContext(30)
nstr = ctx.mp.nstr

print(f"{'r':>3} {'m':>24} {'alpha':>24} {'beta':>24}")
for r in range(1, 11):
    rec = modulus_record(r, ctx)
    print(f"{r:>3} {nstr(rec.m, 18):>24} {nstr(rec.alpha, 18):>24} {nstr(rec.beta, 18):>24}")

# r = 1 is the self-dual point for all three
rec = modulus_record(1, ctx)
print(rec.m, rec.alpha, rec.beta)
print("provenance:", rec.provenance)
