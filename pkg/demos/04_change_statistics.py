"""Score labeled cross-period similarities: delta-mu, Welch t, Pearson rho.

Changed words should show lower cross-period cosine than unchanged ones.
delta-mu measures the gap between group means (Welch t-test for
significance); rho is the point-biserial correlation between the binary
label and the cosine, so more negative is better detection.
"""

import numpy as np

from clex.analysis import (
    attach_labels,
    compare_transitions,
    compute_metrics,
    distribution_summary,
    pair_similarities,
)
from clex.corpus import ChangeLabelSet

rng = np.random.default_rng(21)

changed = [f"chg{i}" for i in range(8)]
unchanged = [f"unc{i}" for i in range(24)]
labels = ChangeLabelSet(labels={**{w: 1 for w in changed}, **{w: 0 for w in unchanged}})

# synthetic period vectors: unchanged words barely rotate, changed words do
dim = 16
vectors_a = {w: rng.normal(size=dim) for w in changed + unchanged}
vectors_b = {}
for w, v in vectors_a.items():
    noise = rng.normal(size=dim)
    mix = 0.9 if w in changed else 0.08  # how far the word moves
    vectors_b[w] = (1 - mix) * v + mix * noise

pair = pair_similarities(vectors_a, vectors_b, changed + unchanged, "AN", ("ANG", "NOR"))
rows = attach_labels(pair.rows, labels)

metrics = compute_metrics(rows, "AN")
star = "*" if metrics.delta_mu_starred else ""
print(f"delta_mu = {metrics.delta_mu:+.3f}{star}   (Welch t={metrics.t_statistic:.2f}, p={metrics.t_p_value:.2e})")
star = "*" if metrics.rho_starred else ""
print(f"rho      = {metrics.rho:+.3f}{star}   (p={metrics.rho_p_value:.2e})")

print("\nGroup distributions (20 bins over [0,1]):")
for group, summary in distribution_summary(rows, "AN").items():
    bars = "".join("#" if c else "." for c in summary.counts)
    print(f"  {group:>9}: mean {summary.mean:+.3f}, 95% CI [{summary.ci95[0]:+.3f}, {summary.ci95[1]:+.3f}]  {bars}")

# a second, quieter transition for comparison
vectors_c = {w: 0.95 * v + 0.05 * rng.normal(size=dim) for w, v in vectors_b.items()}
pair2 = pair_similarities(vectors_b, vectors_c, changed + unchanged, "NP", ("NOR", "PLA"))
rows2 = attach_labels(pair2.rows, labels)
metrics2 = compute_metrics(rows2, "NP")

report = compare_transitions(metrics, metrics2)
print(f"\nAN vs NP expectations:")
print(f"  delta_mu larger in AN:     {report.delta_mu_larger_in_first}")
print(f"  rho more negative in AN:   {report.rho_more_negative_in_first}")
print(f"  overall mean lower in AN:  {report.overall_mean_lower_in_first}")
