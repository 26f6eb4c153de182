"""Test the periodic grids and spectral operators."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from vortiline.errors import FieldError
from vortiline.fields import (Grid, ScalarField, VectorField, antiderivative, biot_savart_3d, curl, dealias_field,
                              divergence, gradient, laplacian, parseval_sum, perp_gradient, project_solenoidal,
                              relative_divergence, set_workers, spectral_tail_fraction, sqg_velocity)
from vortiline.sqg import random_band_limited


def abc_vorticity(grid, a=1.0, b=1.0, c=1.0):
    return VectorField.from_function(grid, lambda x, y, z: (a * np.sin(z) + c * np.cos(y),
                                                            b * np.sin(x) + a * np.cos(z),
                                                            c * np.sin(y) + b * np.cos(x)))


# ==================== GRIDS ====================

def test_grid_defaults_to_two_pi_box():
    """A grid without lengths gets 2 pi on every axis."""
    grid = Grid((16, 32))
    assert grid.dim == 2
    assert grid.length == pytest.approx((2 * np.pi, 2 * np.pi))
    assert grid.spacing[1] == pytest.approx(2 * np.pi / 32)


def test_grid_rejects_bad_sizes():
    """Point counts must be powers of two, at least eight."""
    with pytest.raises(FieldError, match='powers of two'):
        Grid((12, 16))
    with pytest.raises(FieldError, match='powers of two'):
        Grid((4, 4))
    with pytest.raises(FieldError, match='2D or 3D'):
        Grid((16,))


def test_grid_rejects_nonpositive_length():
    with pytest.raises(FieldError, match='positive'):
        Grid((16, 16), (1.0, -1.0))


def test_field_shape_checked():
    """Values must match the grid shape."""
    with pytest.raises(FieldError, match='shape'):
        ScalarField(Grid((16, 16)), np.zeros((16, 8)))


def test_fields_are_immutable():
    field = ScalarField(Grid((8, 8)), np.ones((8, 8)))
    with pytest.raises(ValueError):
        field.values[0, 0] = 2.0


def test_set_workers_rejects_zero():
    with pytest.raises(FieldError, match='at least 1'):
        set_workers(0)


# ==================== OPERATORS ====================

def test_gradient_of_trig_polynomial():
    """The spectral gradient is exact for resolved modes."""
    grid = Grid((32, 32))
    f = ScalarField.from_function(grid, lambda x, y: np.sin(x) * np.cos(2 * y))
    grad = gradient(f)
    x, y = grid.mesh()
    assert np.allclose(grad.components[0], np.cos(x) * np.cos(2 * y), atol=1e-12)
    assert np.allclose(grad.components[1], -2 * np.sin(x) * np.sin(2 * y), atol=1e-12)


def test_laplacian_eigenfunction():
    grid = Grid((16, 16, 16))
    f = ScalarField.from_function(grid, lambda x, y, z: np.sin(x + 2 * y - z))
    assert np.allclose(laplacian(f).values, -6.0 * f.values, atol=1e-11)


def test_perp_gradient_is_divergence_free():
    grid = Grid((32, 32))
    theta = random_band_limited(grid, seed=3)
    assert divergence(perp_gradient(theta)).max_abs() < 1e-12 * perp_gradient(theta).max_magnitude()


def test_sqg_velocity_is_divergence_free_and_mean_free():
    """The SQG velocity drops the mean of theta and has no divergence."""
    grid = Grid((32, 32))
    theta = ScalarField(grid, random_band_limited(grid, seed=1).values + 5.0)
    u = sqg_velocity(theta)
    assert relative_divergence(u) < 1e-12
    assert abs(np.mean(u.components[0])) < 1e-13
    plain = sqg_velocity(random_band_limited(grid, seed=1))
    assert np.allclose(u.components[0], plain.components[0], atol=1e-13)


def test_sqg_velocity_single_mode():
    """For theta = cos(k x) the velocity is (0, -sin(k x))."""
    grid = Grid((16, 16))
    theta = ScalarField.from_function(grid, lambda x, y: np.cos(3 * x) + 0 * y)
    u = sqg_velocity(theta)
    x, _ = grid.mesh()
    assert np.allclose(u.components[0], 0.0, atol=1e-13)
    assert np.allclose(u.components[1], -np.sin(3 * x), atol=1e-12)


def test_curl_of_gradient_vanishes():
    grid = Grid((16, 16, 16))
    f = ScalarField.from_function(grid, lambda x, y, z: np.sin(x) * np.cos(y) * np.sin(2 * z))
    assert curl(gradient(f)).max_magnitude() < 1e-12


def test_biot_savart_recovers_beltrami_velocity():
    """ABC flow satisfies curl u = u, so the velocity equals the vorticity."""
    grid = Grid((16, 16, 16))
    omega = abc_vorticity(grid, 1.0, 0.7, 0.3)
    u = biot_savart_3d(omega)
    assert (u - omega).max_magnitude() < 1e-12
    assert (curl(u) - omega).max_magnitude() < 1e-12


def test_biot_savart_rejects_divergent_input():
    grid = Grid((16, 16, 16))
    f = ScalarField.from_function(grid, lambda x, y, z: np.sin(x) * np.sin(y) * np.sin(z))
    with pytest.raises(FieldError, match='not solenoidal'):
        biot_savart_3d(gradient(f))


def test_biot_savart_projects_on_request():
    """With project set the gradient part is removed first."""
    grid = Grid((16, 16, 16))
    omega = abc_vorticity(grid)
    f = ScalarField.from_function(grid, lambda x, y, z: np.sin(x) * np.sin(y) * np.sin(z))
    polluted = omega + gradient(f)
    assert (biot_savart_3d(polluted, project=True) - biot_savart_3d(omega)).max_magnitude() < 1e-12


def test_biot_savart_rejects_2d():
    with pytest.raises(FieldError, match='3D'):
        biot_savart_3d(VectorField.zeros(Grid((16, 16))))


def test_project_solenoidal_is_idempotent():
    grid = Grid((16, 16, 16))
    v = VectorField.from_function(grid, lambda x, y, z: (np.sin(x + y), np.cos(z) * np.sin(x), np.sin(y + z)))
    once = project_solenoidal(v)
    assert relative_divergence(once) < 1e-12
    assert (project_solenoidal(once) - once).max_magnitude() < 1e-13


def test_biot_savart_single_mode():
    """omega = (0, 0, sin(2x + 3y)) has u = (3, -2, 0) cos(2x + 3y) / 13."""
    grid = Grid((16, 16, 16))
    omega = VectorField.from_function(grid, lambda x, y, z: (0 * x, 0 * y, np.sin(2 * x + 3 * y) + 0 * z))
    u = biot_savart_3d(omega)
    x, y, _ = grid.mesh()
    wave = np.cos(2 * x + 3 * y) / 13.0
    assert np.allclose(u.components[0], 3.0 * wave, atol=1e-13)
    assert np.allclose(u.components[1], -2.0 * wave, atol=1e-13)
    assert np.allclose(u.components[2], 0.0, atol=1e-13)


def test_antiderivative_inverts_gradient():
    grid = Grid((16, 16, 16))
    phi = ScalarField.from_function(grid, lambda x, y, z: np.sin(x) * np.cos(2 * y) + np.cos(3 * x + y - 2 * z))
    grad = gradient(phi)
    assert (gradient(antiderivative(grad)) - grad).max_magnitude() < 1e-12


def test_nyquist_modes_split_consistently():
    """With Nyquist content the projection is still exact and the two parts add back up."""
    grid = Grid((16, 16, 16))
    rng = np.random.default_rng(0)
    v = VectorField(grid, list(rng.standard_normal((3,) + grid.shape)))
    solenoidal = project_solenoidal(v)
    assert relative_divergence(solenoidal) < 1e-12
    assert (project_solenoidal(solenoidal) - solenoidal).max_magnitude() < 1e-12
    assert (solenoidal + gradient(antiderivative(v)) - v).max_magnitude() < 1e-12


def test_nonfinite_input_rejected():
    grid = Grid((8, 8))
    values = np.zeros((8, 8))
    values[2, 3] = np.nan
    with pytest.raises(FieldError, match='non-finite'):
        gradient(ScalarField(grid, values))


# ==================== DEALIASING AND SPECTRA ====================

def test_dealias_removes_high_modes_only():
    """Modes above n/3 are zeroed, modes below survive untouched."""
    grid = Grid((32, 32))
    low = ScalarField.from_function(grid, lambda x, y: np.sin(3 * x) * np.cos(2 * y))
    high = ScalarField.from_function(grid, lambda x, y: np.sin(15 * x) + 0 * y)
    assert np.allclose(dealias_field(low).values, low.values, atol=1e-13)
    assert dealias_field(high).max_abs() < 1e-13


def test_tail_fraction_sees_small_scales():
    grid = Grid((32, 32, 32))
    smooth = abc_vorticity(grid)
    rough = VectorField.from_function(grid, lambda x, y, z: (np.sin(9 * y), np.sin(9 * z), np.sin(9 * x)))
    assert spectral_tail_fraction(smooth) < 1e-20
    assert spectral_tail_fraction(rough) == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(arrays(np.float64, (8, 8), elements=st.floats(-10.0, 10.0)))
def test_parseval_identity(values):
    """Sum of squares in physical space equals the weighted spectral sum."""
    field = ScalarField(Grid((8, 8)), values)
    expected = float(np.sum(values ** 2))
    assert parseval_sum(field) == pytest.approx(expected, rel=1e-10, abs=1e-10)


def test_dealiased_product_matches_fine_grid():
    """On 32^2 the 2/3-rule product equals the exact product truncated to |m| <= 10."""
    def f(x, y):
        return np.sin(3 * x) * np.cos(7 * y) + np.cos(9 * x + 2 * y)

    def g(x, y):
        return np.cos(8 * x) * np.sin(5 * y) + np.sin(10 * y - 4 * x)

    fine = Grid((64, 64))
    x, y = fine.mesh()
    coeffs = np.fft.fft2(f(x, y) * g(x, y))
    m = np.abs(np.fft.fftfreq(64, 1.0 / 64))
    keep = (m[:, None] <= 10) & (m[None, :] <= 10)
    oracle = np.fft.ifft2(np.where(keep, coeffs, 0.0)).real[::2, ::2]

    coarse = Grid((32, 32))
    product = ScalarField(coarse, f(*coarse.mesh()) * g(*coarse.mesh()))
    once = dealias_field(product)
    assert np.allclose(once.values, oracle, atol=1e-12)
    assert np.max(np.abs(product.values - oracle)) > 0.1
    assert np.allclose(dealias_field(once).values, once.values, atol=1e-14)
