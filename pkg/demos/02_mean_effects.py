"""Mean percentile analysis: t tests, Cohen's d, confidence intervals.

Reproduces the style of analysis used to compare three institutions'
mean inverted percentiles against the population value of 50 and against
each other, asking not just "is the difference significant?" but "is it
big enough to matter?".
"""

from pct_impact import (
    SummaryStats,
    ci_overlap_verdict,
    one_sample_t,
    pooled_sd,
    summary_table,
    two_sample_pooled_t,
    two_sample_welch_t,
)

# published-style summary moments: (n, mean, sd) per institution
stats = {
    "Institution 1": SummaryStats.from_moments(268, 49.67, 30.66),
    "Institution 2": SummaryStats.from_moments(549, 32.15, 27.49),
    "Institution 3": SummaryStats.from_moments(488, 45.98, 29.40),
}

print(summary_table(stats, mu0=50.0).to_text())

print("Reading the table: Institution 1 sits at the population mean "
      "(t = -0.17, d = -0.011, negligible). Institution 2 is almost 18 points "
      "better; d = -0.649 is a solid medium effect, not just a significant one.\n")

r1 = one_sample_t(stats["Institution 1"], 50.0)
r2 = one_sample_t(stats["Institution 2"], 50.0)
r3 = one_sample_t(stats["Institution 3"], 50.0)

verdict_12 = ci_overlap_verdict((r1.ci_low, r1.ci_high), (r2.ci_low, r2.ci_high))
verdict_13 = ci_overlap_verdict((r1.ci_low, r1.ci_high), (r3.ci_low, r3.ci_high))
print("CI overlap rule (disjoint 95% CIs imply significance at the .01 level,")
print("overlap says nothing about the .05 level):")
print(f"  1 vs 2: {verdict_12.statement}")
print(f"  1 vs 3: {verdict_13.statement}\n")

print("Pairwise differences:")
for a, b in [("Institution 1", "Institution 2"),
             ("Institution 1", "Institution 3"),
             ("Institution 3", "Institution 2")]:
    r = two_sample_pooled_t(stats[a], stats[b])
    w = two_sample_welch_t(stats[a], stats[b])
    print(f"  {a} vs {b}: diff {r.estimate:6.2f}, pooled sd {r.pooled_sd:.2f}, "
          f"t {r.statistic_t:5.2f} (welch {w.statistic_t:5.2f}), "
          f"d {r.effect_d:+.3f} -> {r.magnitude.value}")

sp = pooled_sd(stats["Institution 1"], stats["Institution 2"])
print(f"\npooled SD for 1 vs 2 spelled out: sqrt(816.098) = {sp:.2f}")
