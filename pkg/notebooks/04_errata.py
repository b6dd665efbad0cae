"""
Printed variants that do not hold
=================================

Each ``*_as_printed`` entry keeps a transcribed form next to its
corrected twin.  The residual shows how far off it is.
"""
from ramapi.corpus import load_default, verify_entry
from ramapi.moduli import BETA3R_DENOMINATOR, BETA3R_PRINTED_DENOMINATOR, beta_3r_from_alpha
from ramapi.mpcore import PrecisionContext

ctx = PrecisionContext(60)
corpus = load_default()

for eid in corpus.ids():
    entry = corpus.entries[eid]
    if entry.erratum is None:
        continue
    rep = verify_entry(eid, ctx)
    print(f"{eid:28s} {rep.status:26s} rel={ctx.mp.nstr(rep.rel_residual, 3)}")
    print("    ", entry.erratum)

# beta_{3r} from alpha_r with each denominator, against the solver at r = 1
from ramapi.moduli import beta_solve

b3 = beta_solve(3, ctx)
for d in (BETA3R_DENOMINATOR, BETA3R_PRINTED_DENOMINATOR):
    diff = beta_3r_from_alpha(ctx.mp.mpf(1) / 2, ctx, denominator=d) - b3
    print(f"D={d:2d}  beta_3 error {ctx.mp.nstr(diff, 5)}")
