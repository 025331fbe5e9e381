"""Exact minimum-bin search on a colored instance, with a provable witness.

Sizes that differ by 10^-60-scale amounts are routine here; the search never
rounds, so the witness is a proof, not an estimate.
"""

from fractions import Fraction

from packbound import Item, OracleInstance, VariantRules, min_bins, power, rat

rules = VariantRules("class-constrained", t=2)
items = tuple(
    [Item(i, power(20, 2000 + 4 * i), color=i, label="tiny") for i in range(4)]
    + [Item(4, rat(Fraction(9, 10)) - power(20, 1990), color=0, label="huge")]
)

result = min_bins(OracleInstance(items, rules))
print(f"minimum bins: {result.count} (proven: {result.proven}, "
      f"nodes explored: {result.nodes})")
for b in range(result.witness.cost):
    contents = ", ".join(
        f"{it.label}#{it.ident}(color {it.color})"
        for it in result.witness.bin_items(b)
    )
    print(f"  bin {b}: {contents}")
