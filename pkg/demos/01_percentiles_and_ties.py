"""Percentile ranking walkthrough: formulas, orientation, ties.

Shows how the same citation counts map to percentiles under the common
formula 100*(i-1)/n and the 100*i/n variant, what inversion does, why
zero-citation pinning exists, and how fractional counting resolves the
classic tie-at-the-threshold ambiguity.
"""

from fractions import Fraction

from pct_impact import (
    PercentileFormula,
    PercentileScheme,
    fractional_top_share,
    percentile_rank,
)

citations = [0, 0, 3, 7, 12, 12, 40]
print(f"small reference set: {citations}\n")

for formula in PercentileFormula:
    for inverted in (False, True):
        scheme = PercentileScheme(formula, inverted=inverted)
        out = percentile_rank(citations, scheme)
        label = f"{formula.value:7s} {'inverted' if inverted else 'plain   '}"
        print(f"  {label}: {[round(a.percentile, 1) for a in out]}")

print("\nzero-citation pinning (plain common formula):")
plain = percentile_rank(citations, PercentileScheme(PercentileFormula.COMMON))
pinned = percentile_rank(
    citations, PercentileScheme(PercentileFormula.COMMON, zero_rank_adjust=True)
)
print(f"  unpinned: {[round(a.percentile, 1) for a in plain]}")
print(f"  pinned:   {[round(a.percentile, 1) for a in pinned]}")
print("  the two uncited papers now sit at a constant 0 regardless of set makeup")

# The textbook tie problem: 50 papers, 3 with 61 citations, 7 with 58,
# 40 with 1. Which are "the top 10%"? Strictly above the threshold there
# are only 3 papers (6%); including the tie group gives 10 (20%).
tie_set = [61] * 3 + [58] * 7 + [1] * 40
fts = fractional_top_share(tie_set, 10.0)
print(f"\ntie set: 3x61, 7x58, 40x1 citations, top 10% of n=50 is {fts.slots} slots")
print(f"  binary readings: 3/50 ({float(fts.binary_share_excluding_ties):.0%}) or "
      f"10/50 ({float(fts.binary_share_including_ties):.0%})")
print(f"  fractional: the three 61s get weight 1, the seven 58s share the "
      f"remaining {fts.slots - fts.count_above} slots -> weight {fts.weight_at_threshold}")
print(f"  set-level share is exact again: {fts.share} = {float(fts.share):.2%}")
assert fts.share == Fraction(1, 10)
