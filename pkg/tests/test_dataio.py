import math

import numpy as np
import pytest

from circsizer.dataio import (
    IngestSpec,
    SchemaError,
    compass_to_math,
    export_map,
    import_map,
    ingest,
    lag_subsample,
    math_to_compass,
)
from circsizer.density import CircularSample, EmptySampleError
from circsizer.inference import BootstrapConfig, substream
from circsizer.kernels import TWO_PI, wrap
from circsizer.regression import CircLinearSample
from circsizer.sizer import SmoothingGrid, build_map


class TestConventions:
    @pytest.mark.parametrize(
        "compass,mathv",
        [
            (0.0, np.pi / 2),  # North
            (np.pi / 2, 0.0),  # East
            (np.pi, 3 * np.pi / 2),  # South
            (3 * np.pi / 2, np.pi),  # West
        ],
    )
    def test_cardinal_points(self, compass, mathv):
        assert compass_to_math(compass) == pytest.approx(mathv)

    def test_involution(self):
        theta = substream(1, 0).uniform(0, TWO_PI, 200)
        np.testing.assert_allclose(
            compass_to_math(compass_to_math(theta)), theta, atol=1e-12
        )
        np.testing.assert_allclose(
            math_to_compass(compass_to_math(theta)), theta, atol=1e-12
        )


class TestIngestSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            IngestSpec(angle_column="a", angle_unit="grads")
        with pytest.raises(ValueError):
            IngestSpec(angle_column="a", angle_convention="nautical")
        with pytest.raises(ValueError):
            IngestSpec(angle_column="a", lag=0)


@pytest.fixture
def wind_csv(tmp_path):
    """Hourly compass-degree wind directions: 19000 rows, some unusable."""
    rng = substream(2, 0)
    path = tmp_path / "wind.csv"
    lines = ["timestamp,direction,speed"]
    for i in range(19000):
        if i % 5000 == 4999:
            lines.append(f"t{i},,1.0")  # missing angle
        elif i % 7000 == 6999:
            lines.append(f"t{i},999,1.0")  # sentinel
        else:
            d = rng.uniform(0.0, 360.0)
            lines.append(f"t{i},{d!r},{rng.uniform(0, 20)!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestIngest:
    def test_compass_degrees_with_lag(self, wind_csv):
        spec = IngestSpec(
            angle_column="direction",
            angle_unit="degrees",
            angle_convention="compass",
            lag=95,
            sentinel=999.0,
        )
        sample = ingest(wind_csv, spec)
        assert isinstance(sample, CircularSample)
        # 19000 rows minus a handful of drops, then every 95th
        assert 195 <= sample.n <= 200
        assert np.all((sample.angles >= 0) & (sample.angles < TWO_PI))

    def test_drops_are_logged(self, wind_csv, caplog):
        spec = IngestSpec(angle_column="direction", sentinel=999.0)
        with caplog.at_level("WARNING", logger="circsizer.dataio"):
            ingest(wind_csv, spec)
        assert sum("row dropped" in r.message for r in caplog.records) >= 4

    def test_paired_ingest(self, wind_csv):
        spec = IngestSpec(
            angle_column="direction",
            response_column="speed",
            sentinel=999.0,
        )
        sample = ingest(wind_csv, spec)
        assert isinstance(sample, CircLinearSample)
        assert sample.angles.size == sample.responses.size

    def test_radians_math_identity(self, tmp_path):
        path = tmp_path / "r.csv"
        vals = [0.1, 1.0, 3.5, 6.0]
        path.write_text(
            "a\n" + "\n".join(repr(v) for v in vals) + "\n", encoding="utf-8"
        )
        spec = IngestSpec(angle_column="a", angle_unit="radians", angle_convention="math")
        np.testing.assert_allclose(ingest(path, spec).angles, vals, atol=1e-15)

    def test_missing_column(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("x,y\n1,2\n", encoding="utf-8")
        with pytest.raises(SchemaError, match="direction"):
            ingest(path, IngestSpec(angle_column="direction"))

    def test_no_usable_rows(self, tmp_path):
        path = tmp_path / "e.csv"
        path.write_text("a\nfoo\nnan\n\n", encoding="utf-8")
        with pytest.raises(EmptySampleError):
            ingest(path, IngestSpec(angle_column="a"))

    def test_non_finite_response_dropped(self, tmp_path):
        path = tmp_path / "p.csv"
        path.write_text("a,y\n10,1.5\n20,inf\n30,oops\n40,2.5\n", encoding="utf-8")
        s = ingest(path, IngestSpec(angle_column="a", response_column="y"))
        assert s.angles.size == 2
        np.testing.assert_allclose(s.responses, [1.5, 2.5])


class TestLagSubsample:
    def test_lag_one_is_identity(self):
        s = CircularSample(np.array([0.1, 0.2, 0.3]))
        np.testing.assert_array_equal(lag_subsample(s, 1).angles, s.angles)

    def test_stride(self):
        s = CircularSample(np.linspace(0.0, 6.0, 10))
        out = lag_subsample(s, 4)
        np.testing.assert_allclose(out.angles, s.angles[[0, 4, 8]])

    def test_pairs_stay_aligned(self):
        th = np.linspace(0.0, 6.0, 9)
        s = CircLinearSample(th, th * 2)
        out = lag_subsample(s, 3)
        np.testing.assert_allclose(out.responses, out.angles * 2)

    def test_invalid_lag(self):
        with pytest.raises(ValueError):
            lag_subsample(CircularSample(np.array([1.0])), 0)


@pytest.fixture(scope="module")
def small_map():
    rng = substream(3, 0)
    sample = CircularSample(wrap(rng.vonmises(np.pi, 3.0, 80)))
    grid = SmoothingGrid(16, np.array([2.0, 12.0]))
    return build_map(sample, "density", grid, BootstrapConfig(B=40, seed=4))


class TestMapSerialization:
    def test_round_trip_preserves_cells(self, small_map, tmp_path):
        path = tmp_path / "map.json"
        export_map(small_map, path)
        back = import_map(path)
        assert back.mode == small_map.mode
        assert back.grid.ngrid == small_map.grid.ngrid
        np.testing.assert_array_equal(back.estimate, small_map.estimate)
        np.testing.assert_array_equal(back.ess, small_map.ess)
        assert (back.states == small_map.states).all()
        assert back.config == small_map.config

    def test_export_import_export_byte_identical(self, small_map, tmp_path):
        p1 = tmp_path / "a.json"
        p2 = tmp_path / "b.json"
        export_map(small_map, p1)
        export_map(import_map(p1), p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_state_tokens(self, small_map, tmp_path):
        import json

        path = tmp_path / "map.json"
        export_map(small_map, path)
        doc = json.loads(path.read_text())
        toks = {t for row in doc["cells"]["states"] for t in row}
        assert toks <= {"increasing", "decreasing", "flat", "sparse"}
        assert len(doc["cells"]["states"]) == 2
        assert all(len(row) == 16 for row in doc["cells"]["states"])

    def test_nan_round_trip(self, small_map, tmp_path):
        from dataclasses import replace

        lower = small_map.lower.copy()
        lower[0, 0] = math.nan
        broken = replace(small_map, lower=lower)
        path = tmp_path / "map.json"
        export_map(broken, path)
        back = import_map(path)
        assert math.isnan(back.lower[0, 0])
        assert np.isfinite(back.lower[0, 1:]).all()

    def test_unknown_schema_version(self, small_map, tmp_path):
        import json

        path = tmp_path / "map.json"
        export_map(small_map, path)
        doc = json.loads(path.read_text())
        doc["schema_version"] = 99
        path.write_text(json.dumps(doc))
        with pytest.raises(SchemaError):
            import_map(path)
