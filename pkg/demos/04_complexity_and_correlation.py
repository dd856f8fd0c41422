# # From frequencies to complexity
#
# Strings produced by many programs are simple; rare strings are complex.
# Here we turn a sweep into complexity estimates, compare them with the
# length of the shortest program found, and with estimates coming from
# small Turing machines.

from pathlib import Path

from imp2.analysis import (
    build_table, complete_output_length, correlate_tables, ctm_vs_spf, load_external,
    significance,
)
from imp2.runner import sweep

agg = sweep(30, 120)
table = build_table(agg)
print(len(table), "strings, complete up to length", complete_output_length(table))

for row in table.rows[:10]:
    print(f"{row.output or 'ε':>5} D={row.D} ctm={row.ctm:.3f} spf={row.spf}")

# Complexity and shortest program length should rise together.

for method in ("spearman", "pearson"):
    rep = ctm_vs_spf(table, method=method, permutations=2000, rng_seed=1)
    print(method, round(rep.coefficient, 4), rep.p_value, significance(rep.p_value))

# The bundled reference table holds estimates for strings up to length 12
# computed from (5,2) Turing machines.

ref = load_external(Path(__file__).resolve().parent.parent / "data" / "ctm_d52.csv", "D(5,2)")
for scope in (None, ("upto", 4), ("length", 3)):
    rep = correlate_tables(table, ref, scope, permutations=2000, rng_seed=1,
                           allow_undefined=True)
    print(rep.scope, rep.n, rep.coefficient, rep.p_value)
