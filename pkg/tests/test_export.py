import re

import numpy as np
import pytest

from slideocam import DesignParams
from slideocam.analysis import active_interval, pressure_profile, sweep
from slideocam.errors import ConfigError, ValidationError
from slideocam.export import (BASELINE, apply_overrides, build_config, fmt, load_raw,
                              parse_config, read_profile_csv, read_raster_csv,
                              write_pressure_csv, write_profile_csv, write_profile_svg,
                              write_raster_csv, write_raster_svg, write_sweep_csv)
from slideocam.feasibility import rasterize_region
from slideocam.geometry import generate_assembly

CONFIG = """\
p = 50.0
n = 2
m = 2
eta = 0.4
a4 = 4.0

[solver]
samples = 90

[analysis]
psi_deg = 120.0

[output]
pitch_overlay = true
"""


class TestConfig:
    def test_parse(self):
        cfg = parse_config(CONFIG)
        assert cfg.params.e == pytest.approx(20.0)
        assert cfg.params.b == 4.25
        assert cfg.samples == 90
        assert cfg.psi == pytest.approx(2 * np.pi / 3)
        assert cfg.pitch_overlay

    def test_defaults(self):
        cfg = parse_config("p = 50\nn = 1\ne = 9\na4 = 10\n")
        assert cfg.params.m == 2 and cfg.params.b == 4.25 and cfg.samples == 720

    def test_overrides(self):
        cfg = parse_config(CONFIG, ["e=25", "solver.samples=40", "b=3"])
        assert cfg.params.e == 25.0 and cfg.samples == 40 and cfg.params.b == 3.0
        raw = apply_overrides(BASELINE, ["eta=0.5"])
        assert "e" not in raw and BASELINE["e"] == 9.0

    def test_syntax_error_location(self):
        with pytest.raises(ConfigError) as info:
            load_raw("p = 50\nn = = 2\n")
        assert info.value.line == 2

    @pytest.mark.parametrize("text,field", [
        ("p = 50\nn = 1\na4 = 4\n", "e"),
        ("p = 50\nn = 1\ne = 9\neta = 0.2\na4 = 4\n", "eta"),
        ("p = 50\nn = 1\ne = 9\na4 = 4\nq = 1\n", "q"),
        ("p = 50\nn = 1\ne = 9\na4 = 4\n[solver]\nfoo = 1\n", "solver.foo"),
        ("p = 50\nn = 1.5\ne = 9\na4 = 4\n", "n"),
        ("p = -50\nn = 1\ne = 9\na4 = 4\n", "p"),
        ("p = 50\nn = 1\ne = 9\na4 = 4\n[solver]\nsamples = 3\n", "solver.samples"),
        ("p = 50\nn = 1\ne = 'x'\na4 = 4\n", "e"),
    ])
    def test_validation(self, text, field):
        with pytest.raises(ValidationError) as info:
            parse_config(text)
        assert info.value.field == field

    def test_bad_override(self):
        with pytest.raises(ValidationError):
            apply_overrides({}, ["novalue"])


@pytest.fixture(scope="module")
def assembly():
    return generate_assembly(DesignParams(p=50, n=2, m=2, e=20, a4=4), 64)


class TestCsv:
    def test_fmt_roundtrip(self, rng):
        x = rng.normal(size=1000) * 10.0 ** rng.integers(-12, 12, 1000)
        assert all(float(fmt(v)) == v for v in x)

    def test_profile_roundtrip(self, assembly):
        text = write_profile_csv(assembly)
        meta, cols = read_profile_csv(text)
        pts = np.vstack([c.points for c in assembly.cams])
        assert np.array_equal(cols["u_mm"], pts[:, 0])
        assert np.array_equal(cols["v_mm"], pts[:, 1])
        assert meta["n"] == "2" and meta["curve"] == "profile"
        assert float(meta["delta"]) == assembly.extended.delta
        assert text == write_profile_csv(assembly)

    def test_pitch_curve(self, assembly):
        _, cols = read_profile_csv(write_profile_csv(assembly, curve="pitch"))
        assert np.array_equal(cols["u_mm"][: len(assembly.cams[0])], assembly.cams[0].pitch[:, 0])

    def test_not_a_profile(self):
        with pytest.raises(ConfigError):
            read_profile_csv("a,b\n1,2\n")

    def test_raster_roundtrip(self):
        r = rasterize_region(50, 4.25, 1, resolution=(12, 9))
        meta, eta, a4, cells = read_raster_csv(write_raster_csv(r))
        assert np.array_equal(eta, r.eta_axis) and np.array_equal(a4, r.a4_axis)
        assert np.array_equal(cells, r.cells)
        assert meta["n"] == "1"

    def test_sweep_and_pressure(self):
        d = DesignParams(p=50, n=1, m=2, e=9, a4=10)
        text = write_sweep_csv(sweep(d, "a4", [4.0, 25.0]), d)
        assert "value,delta,psi_lo" in text and "infeasible" in text
        table = pressure_profile(d, active_interval(d), 5)
        lines = write_pressure_csv(table, d).splitlines()
        rows = [l for l in lines if not l.startswith("#")]
        assert rows[0] == "psi_rad,mu_rad,mu_deg,is_max"
        assert rows[1].endswith(",1") and len(rows) == 6


class TestSvg:
    def test_profile_svg(self, assembly):
        svg = write_profile_svg(assembly, pitch_overlay=True)
        assert svg.startswith("<?xml") and svg.rstrip().endswith("</svg>")
        assert 'viewBox="' in svg and "mm" in svg
        assert svg.count("<path") >= 4
        assert svg == write_profile_svg(assembly, pitch_overlay=True)
        assert "-0.0000" not in svg

    def test_first_vertex_is_flipped_point(self, assembly):
        svg = write_profile_svg(assembly, axes=False)
        m = re.search(r'd="M(-?[\d.]+),(-?[\d.]+)', svg)
        u, v = assembly.cams[0].points[0]
        assert float(m.group(1)) == pytest.approx(u, abs=1e-4)
        assert float(m.group(2)) == pytest.approx(-v, abs=1e-4)

    def test_raster_svg(self):
        svg = write_raster_svg(rasterize_region(50, 4.25, 1, resolution=10))
        assert svg.startswith("<?xml") and 'fill="lightgreen"' in svg
