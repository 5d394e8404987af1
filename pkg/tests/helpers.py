"""Synthetic corpora with a planted semantic-change signal.

Changed target words swap their context-word pool between the two periods;
stable targets keep theirs.  A detector scoring cross-period cosine should
separate the two groups cleanly.
"""

from __future__ import annotations

import numpy as np

from clex.corpus import PeriodSlice, PeriodSpec


def planted_corpus(
    n_changed: int = 10,
    n_stable: int = 50,
    sentences_per_target: int = 5,
    pool_size: int = 30,
    seed: int = 99,
) -> tuple[dict[str, PeriodSlice], set[str], set[str]]:
    """Two period slices with swapped context distributions for changed words.

    Every sentence interleaves three occurrences of one target with six
    context words drawn from the target's current pool, so each target
    occurs 3 * sentences_per_target times per period.
    """
    rng = np.random.default_rng(seed)
    pool_a = [f"aqua{i:02d}" for i in range(pool_size)]
    pool_b = [f"bellum{i:02d}" for i in range(pool_size)]
    changed = [f"chg{i:02d}" for i in range(n_changed)]
    stable = [f"stb{i:02d}" for i in range(n_stable)]

    def pool_for(word: str, period: int) -> list[str]:
        if word in changed:
            return pool_a if period == 0 else pool_b
        return pool_a if stable.index(word) % 2 == 0 else pool_b

    def sentences_for(period: int) -> list[list[str]]:
        sentences = []
        for target in changed + stable:
            pool = pool_for(target, period)
            for _ in range(sentences_per_target):
                ctx = rng.choice(pool, size=6)
                sentences.append(
                    [ctx[0], ctx[1], target, ctx[2], ctx[3], target, ctx[4], ctx[5], target]
                )
        order = rng.permutation(len(sentences))
        return [sentences[i] for i in order]

    slices = {
        "P1": PeriodSlice(PeriodSpec("P1", 1, 50), sentences_for(0), charter_count=0),
        "P2": PeriodSlice(PeriodSpec("P2", 51, 100), sentences_for(1), charter_count=0),
    }
    return slices, set(changed), set(stable)
