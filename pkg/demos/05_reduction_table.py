"""The cost comparison table for every built-in optimization variant.

Rows are not cumulative left to right: each resampling row modifies the
ungrouped baseline, the pruning rows build on async(16) resampling, and
only the final row adds grouping on top of everything.
"""

from bsrnnlite import canonical_chain, reduction_table

base, variants = canonical_chain(extended=True)
table = reduction_table(base, variants, duration=1.0)
print(table.to_text())

final = table.rows[-1]
first = table.rows[0]
print()
print(f"{final.name} needs {final.total_macs / first.total_macs:.3f}x the "
      f"baseline's multiplies, a {final.reduction_pct:.1f}% reduction.")
print()
print("the same table as csv:")
print(reduction_table(base, variants[:2], duration=1.0).to_csv())
