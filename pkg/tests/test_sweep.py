import csv

import pytest

from clex.sgns import InitStrategy, SweepReport, TrainConfig, sweep


@pytest.fixture
def two_slices(make_slice, rng):
    words = [f"w{i}" for i in range(8)]
    return {
        "P1": make_slice([list(rng.choice(words, size=5)) for _ in range(15)], name="P1"),
        "P2": make_slice(
            [list(rng.choice(words, size=5)) for _ in range(15)], name="P2", years=(101, 200)
        ),
    }


def config():
    return TrainConfig(dim=4, epochs=1, seed=1, min_count=1, bucket_count=32, window=2, negatives=2)


class TestSweep:
    def test_full_grid_has_six_cells(self, two_slices):
        report = sweep(
            two_slices,
            InitStrategy.INCREMENTAL,
            config(),
            lambda spaces: (0.0, 0.0),
            dims=(4, 6),
            epoch_grid=(1, 2, 3),
        )
        assert len(report.cells) == 6
        assert {(c.dim, c.epochs) for c in report.cells} == {
            (d, e) for d in (4, 6) for e in (1, 2, 3)
        }

    def test_duplicate_grid_values_collapsed(self, two_slices):
        report = sweep(
            two_slices,
            InitStrategy.INCREMENTAL,
            config(),
            lambda spaces: (0.0, 0.0),
            dims=(4, 4),
            epoch_grid=(1, 1, 2),
        )
        assert {(c.dim, c.epochs) for c in report.cells} == {(4, 1), (4, 2)}
        assert len(report.cells) == 2

    def test_constant_evaluator_plumbing(self, two_slices):
        report = sweep(
            two_slices,
            InitStrategy.INCREMENTAL,
            config(),
            lambda spaces: (0.0, 0.0),
            dims=(4,),
            epoch_grid=(1,),
        )
        assert report.cells[0].delta_mu == 0.0
        assert report.cells[0].rho == 0.0

    def test_evaluator_receives_trained_spaces(self, two_slices):
        seen = []
        sweep(
            two_slices,
            InitStrategy.INCREMENTAL,
            config(),
            lambda spaces: (seen.append(sorted(spaces)), (0.0, 0.0))[1],
            dims=(4,),
            epoch_grid=(1,),
        )
        assert seen == [["P1", "P2"]]

    def test_backward_external_requires_pretrained(self, two_slices):
        with pytest.raises(ValueError, match="pretrained_path"):
            sweep(
                two_slices,
                InitStrategy.BACKWARD_EXTERNAL,
                config(),
                lambda spaces: (0.0, 0.0),
                dims=(4,),
                epoch_grid=(1,),
            )

    def test_csv_round_trip(self, tmp_path):
        report = SweepReport(
            strategy="incremental",
            cells=[],
        )
        from clex.sgns import SweepCell

        report.cells = [SweepCell(4, 1, 0.25, -0.5), SweepCell(4, 2, 0.125, -0.25)]
        path = tmp_path / "sweep.csv"
        report.to_csv(path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["strategy", "dim", "epochs", "delta_mu", "rho"]
        assert rows[1] == ["incremental", "4", "1", "0.25", "-0.5"]
        assert len(rows) == 3
