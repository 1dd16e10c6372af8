import numpy as np
import pytest

from ridgecav import GridSpec, SampledField, ZeroField, load_field_csv, save_field_csv


def test_gridspec_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        GridSpec(nx=100, ny=128)
    with pytest.raises(ValueError):
        GridSpec(nx=8, ny=128)  # below the minimum of 16
    with pytest.raises(ValueError):
        GridSpec(window_x_um=-1.0)


def test_grid_coordinates_are_cell_centered():
    g = GridSpec(nx=16, ny=16, window_x_um=16.0, window_y_um=16.0)
    x = g.x_coords_um()
    assert x[0] == pytest.approx(-7.5)
    assert x[-1] == pytest.approx(7.5)
    assert np.allclose(np.diff(x), 1.0)


def test_field_power_and_normalization():
    amps = np.ones((16, 16), dtype=complex)
    f = SampledField(amplitudes=amps, dx_um=0.5, dy_um=0.5, wavelength_nm=780.0)
    assert f.power() == pytest.approx(16 * 16 * 0.25)
    assert f.normalized().power() == pytest.approx(1.0, abs=1e-12)


def test_zero_field_cannot_be_normalized():
    f = SampledField(np.zeros((16, 16)), dx_um=0.5, dy_um=0.5)
    with pytest.raises(ZeroField):
        f.normalized()


def test_field_rejects_non_finite_amplitudes():
    amps = np.ones((16, 16), dtype=complex)
    amps[3, 3] = np.nan
    with pytest.raises(ValueError):
        SampledField(amps, dx_um=0.5, dy_um=0.5)


def test_csv_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    amps = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    f = SampledField(amps, dx_um=0.25, dy_um=0.5, wavelength_nm=780.0)
    path = tmp_path / "field.csv"
    save_field_csv(f, path)
    header = path.read_text().splitlines()[0]
    assert header == "x_um,y_um,re,im"
    g = load_field_csv(path, wavelength_nm=780.0)
    assert g.nx == f.nx and g.ny == f.ny
    assert g.dx_um == pytest.approx(f.dx_um)
    assert g.dy_um == pytest.approx(f.dy_um)
    # 6 significant digits in the file bound the round-trip error
    assert np.allclose(g.amplitudes, f.amplitudes, atol=1e-5, rtol=1e-5)
