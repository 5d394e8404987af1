"""Walk through corpus ingestion: charters -> period slices -> target words.

Charters are dated documents; the default period layout splits them at the
1065/1066 and 1153/1154 boundaries.  Targets are the words frequent enough
(strictly more than 5 per 100k tokens) in every period.
"""

from clex.corpus import (
    Charter,
    DEFAULT_PERIODS,
    compute_frequencies,
    normalize_and_tokenize,
    select_targets,
    split_periods,
)

charters = [
    Charter("c1", 1020, "Rex Aedwardus dedit terram; terram habet abbas."),
    Charter("c2", 1049, "Rex confirmavit terram. Abbas tenet terram cum salute."),
    Charter("c3", 1071, "Willelmus rex Anglorum dedit terram abbati."),
    Charter("c4", 1100, "Henricus rex concessit terram; abbas habet cartam."),
    Charter("c5", 1200, "Carta confirmat terram. Rex habet servitium abbatis."),
    Charter("c6", 1290, "Extra omnes terminos datus."),  # after every period: excluded
]

print("Tokenization of the first charter:")
for sentence in normalize_and_tokenize(charters[0].text):
    print("  ", sentence)

result = split_periods(charters, DEFAULT_PERIODS)
print("\nPeriod slices:")
for name, sl in result.slices.items():
    print(f"  {name}: {sl.charter_count} charters, {sl.token_count} tokens")
print(f"  excluded: {[c.id for c in result.excluded]}")

freqs = compute_frequencies(result.slices)
print("\nPer-period totals:", dict(freqs.totals))

# on a toy corpus every recurring word clears 5-per-100k easily
targets = select_targets(freqs, threshold_per_100k=5.0)
print(f"\n{len(targets)} target words frequent in all periods:")
print("  ", sorted(targets))
