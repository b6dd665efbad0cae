"""
Checking the closed-form corpus
===============================

Every entry is an exact expression plus an independent numeric
oracle.  Entries flagged as errata must fail.
"""
from ramapi.corpus import load_default, summarize, verify_all
from ramapi.mpcore import PrecisionContext

ctx = PrecisionContext(60)
corpus = load_default()
print(len(corpus.ids()), "entries")

reports = verify_all(ctx)
print(summarize(reports))

# the worst relative residual among passing entries
passing = [r for r in reports if r.status == "pass"]
worst = max(passing, key=lambda r: r.rel_residual)
print("worst pass:", worst.id, ctx.mp.nstr(worst.rel_residual, 3))

# a tighter context shrinks residuals further
reports120 = verify_all(PrecisionContext(120), "alpha_*")
print(summarize(reports120))
