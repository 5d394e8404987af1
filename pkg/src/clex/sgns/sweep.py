"""Hyperparameter grid sweeps over embedding size and epoch count."""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Mapping, Sequence

from ..corpus import PeriodSlice
from .space import EmbeddingSpace
from .strategies import InitStrategy, train_backward_external, train_incremental, train_internal
from .train import TrainConfig

__all__ = ["SweepCell", "SweepReport", "sweep"]

#: Maps trained period spaces to the (delta_mu, rho) pair used to rank cells.
EvalFn = Callable[[Mapping[str, EmbeddingSpace]], tuple[float, float]]


@dataclass(frozen=True)
class SweepCell:
    dim: int
    epochs: int
    delta_mu: float
    rho: float


@dataclass
class SweepReport:
    strategy: str
    cells: list[SweepCell]

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["strategy", "dim", "epochs", "delta_mu", "rho"])
            for cell in self.cells:
                writer.writerow([self.strategy, cell.dim, cell.epochs, cell.delta_mu, cell.rho])


def _dedup(values: Sequence[int]) -> list[int]:
    seen: dict[int, None] = {}
    for v in values:
        seen.setdefault(v)
    return list(seen)


def sweep(
    slices: Mapping[str, PeriodSlice],
    strategy: InitStrategy,
    config: TrainConfig,
    evaluate: EvalFn,
    *,
    dims: Sequence[int] = (100, 300),
    epoch_grid: Sequence[int] = (10, 30, 50),
    pretrained_path: str | Path | None = None,
) -> SweepReport:
    """Train and evaluate every (dim, epochs) grid cell for one strategy.

    Duplicate grid values are collapsed, so each remaining cell is unique.
    """
    cells: list[SweepCell] = []
    for dim in _dedup(dims):
        for epochs in _dedup(epoch_grid):
            cfg = replace(config, dim=dim, epochs=epochs)
            if strategy is InitStrategy.INCREMENTAL:
                spaces = train_incremental(slices, cfg)
            elif strategy is InitStrategy.INTERNAL:
                spaces = train_internal(slices, cfg)
            elif strategy is InitStrategy.BACKWARD_EXTERNAL:
                if pretrained_path is None:
                    raise ValueError("backward-external sweep requires pretrained_path")
                spaces = train_backward_external(slices, pretrained_path, cfg)
            else:  # pragma: no cover - enum is closed
                raise ValueError(f"unknown strategy {strategy!r}")
            delta_mu, rho = evaluate(spaces)
            cells.append(SweepCell(dim=dim, epochs=epochs, delta_mu=delta_mu, rho=rho))
    return SweepReport(strategy=strategy.value, cells=cells)
