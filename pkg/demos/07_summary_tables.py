"""Summary tables: marginals, consistency of a diptych, empty-cell diagnosis.

Two one-way tables over the same population are consistent when a
two-way table restores both as marginals; feasibility of that linear
system is decided exactly, with a witness or a certificate.
"""

from bioassay.tables import (
    CategoryAttribute,
    Polyptych,
    SummaryTable,
    SummaryVariable,
    check_consistency,
    chi_square_independence,
    classify_empty,
    is_homogeneous,
    marginal,
)

counts = SummaryVariable("cases", "nonneg-integer")
exposure = CategoryAttribute("exposure", ("low", "high"))
outcome = CategoryAttribute("outcome", ("no-tumour", "tumour"))

# -- marginals of a two-way table ----------------------------------------------
two_way = SummaryTable(
    scheme=(exposure, outcome),
    variable=counts,
    cells={
        ("low", "no-tumour"): 38, ("low", "tumour"): 2,
        ("high", "no-tumour"): 25, ("high", "tumour"): 15,
    },
)
by_exposure = marginal(two_way, ["exposure"])
print("exposure marginals:", dict(by_exposure.cells))
print("grand total preserved:", by_exposure.grand_total() == two_way.grand_total())

x2, df = chi_square_independence(two_way)
print(f"independence X2 = {x2:.3f} on {df} df")

# -- a diptych of one-way tables --------------------------------------------------
t_exposure = SummaryTable(scheme=(exposure,), variable=counts, cells={("low",): 3, ("high",): 1})
t_outcome = SummaryTable(scheme=(outcome,), variable=counts, cells={("no-tumour",): 2, ("tumour",): 2})
print("\nhomogeneous:", is_homogeneous([t_exposure, t_outcome]))

diptych = Polyptych(tables=(t_exposure, t_outcome))
verdict = check_consistency(diptych)
print("consistent:", verdict.consistent)
print("witness cells:", dict(verdict.witness.cells))

exact = check_consistency(diptych, integer_exact=True)
print("integer witness:", dict(exact.witness.cells))

# -- inconsistency comes with a certificate ----------------------------------------
bad = Polyptych(
    tables=(
        SummaryTable(scheme=(exposure,), variable=counts, cells={("low",): 3}),
        SummaryTable(scheme=(outcome,), variable=counts, cells={("tumour",): 5}),
    )
)
print("\nmismatched totals:", check_consistency(bad).certificate)

# -- structural vs accidental emptiness ----------------------------------------------
masked = Polyptych(
    tables=(t_exposure, t_outcome),
    structural_zeros=frozenset({("high", "no-tumour")}),
)
print("\ncell classification with a structural mask:")
for cell in [("high", "no-tumour"), ("low", "tumour"), ("high", "tumour")]:
    print(f"  {cell}: {classify_empty(masked, cell)}")
