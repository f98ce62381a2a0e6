import math

import numpy as np
import pytest

from vellingcheck.geometry import CirclePiece, StarDomain, arc_disk, lens_domain, unit_disk
from vellingcheck.solver.fd import (fd_green, fd_green_logpolar, fd_harmonic_measure,
                                    fd_harmonic_measure_logpolar, fd_solve)


def shifted_disk(c, r):
    return StarDomain((CirclePiece(c, r, -math.pi, 2 * math.pi, 0, "circle"),), "shifted")


def shifted_green(z, c, r, xi=0j):
    z = np.asarray(z, dtype=complex)
    return np.log(np.abs((r * r - np.conj(xi - c) * (z - c)) / (r * (z - xi))))


def test_disk_arc_oracle():
    f = fd_harmonic_measure(arc_disk(math.pi / 4), 0, h=1 / 128)
    assert abs(float(f(0j)) - 0.25) < 5e-3
    assert f.residual < 1e-8


def test_green_disk_cartesian():
    g = fd_green(unit_disk(), 0.5, h=1 / 128)
    assert abs(float(g(0j)) - math.log(2)) < 5e-3


def test_linear_data_reproduced():
    # x is harmonic; the Shortley-Weller scheme is exact for it up to the solve
    d = lens_domain(math.pi / 3)
    f = fd_solve(d, lambda _lab, pts: pts.real, h=1 / 64)
    z = np.array([0.1 + 0.2j, -0.4 + 0.1j, 0.2 - 0.5j])
    assert np.allclose(f(z), z.real, atol=1e-8)


@pytest.mark.parametrize("c,r", [(0.2 + 0.1j, 0.9), (-0.3j, 0.8)])
def test_logpolar_green_shifted_disk(c, r):
    d = shifted_disk(c, r)
    g = fd_green_logpolar(d, 256)
    z = c + 0.6 * r * np.exp(1j * np.linspace(0, 2 * math.pi, 13))
    z = np.concatenate([z, [0.05 + 0.02j, -0.1j]])
    assert np.allclose(g(z), shifted_green(z, c, r), atol=2e-3)


def test_logpolar_second_order():
    # boundary crossings make single halvings noisy; over two halvings expect close to 16x
    d = shifted_disk(0.25 + 0j, 0.9)
    z = np.array([0.3 + 0.3j, -0.2 + 0.1j, 0.6 + 0.0j])
    errs = [np.max(np.abs(fd_green_logpolar(d, m)(z) - shifted_green(z, 0.25, 0.9))) for m in (64, 256)]
    assert errs[1] < errs[0] / 8


def test_logpolar_matches_cartesian_lens():
    d = lens_domain(math.pi / 4)
    lp = float(fd_harmonic_measure_logpolar(d, 0, 256)(0j))
    ca = float(fd_harmonic_measure(d, 0, 1 / 128)(0j))
    assert abs(lp - 0.5) < 5e-3
    assert abs(lp - ca) < 5e-3


def test_field_is_nan_outside():
    f = fd_harmonic_measure(arc_disk(math.pi / 4), 0, h=1 / 32)
    assert np.isnan(f(np.array([1.2 + 0j]))[0])


def test_green_pole_outside():
    with pytest.raises(ValueError):
        fd_green(unit_disk(), 2.0, h=1 / 16)


def test_csv_export(tmp_path):
    f = fd_harmonic_measure(arc_disk(math.pi / 4), 0, h=1 / 16)
    path = tmp_path / "field.csv"
    f.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,y,value"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape[1] == 3 and len(data) == int(f.inside.sum())
    assert np.all((data[:, 2] >= -1e-9) & (data[:, 2] <= 1 + 1e-9))
