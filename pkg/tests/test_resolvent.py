import numpy as np
import pytest

import deltaop as d
from deltaop.errors import ContourTooClose, ParameterError, SpectrumHit
from deltaop.resolvent import (
    Circle,
    Rectangle,
    contour_integral,
    dunford_apply,
    hille_yosida_resolvent,
    resolvent,
)

from conftest import P_HIGH, P_LOW, VIOLA, maxabs, random_hermitian


def closed_form(op, z):
    dec = d.decompose(op)
    v = dec.vectors
    return (v / (z - dec.eigenvalues)) @ v.conj().T


# --- point resolvent sampling -----------------------------------------------


def test_scalar_resolvent():
    got = resolvent(d.new_hermitian([[0.0]]), 1j)
    assert got.z == 1j
    assert abs(got.matrix[0, 0] - (-1j)) < 1e-14


def test_matches_eigenprojector_expansion(viola):
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if min(abs(z + 1), abs(z - 2)) < 0.1:
            continue
        got = resolvent(viola, z).matrix
        want = closed_form(viola, z)
        assert maxabs(got - want) <= 1e-10 * maxabs(want)


def test_on_spectrum_raises(viola):
    with pytest.raises(SpectrumHit):
        resolvent(viola, 2.0)
    with pytest.raises(SpectrumHit):
        resolvent(viola, -1.0 + 1e-12j)


def test_first_resolvent_identity():
    op = random_hermitian(4, 6)
    z, w = 0.3 + 0.9j, -1.2 - 0.4j
    rz = resolvent(op, z).matrix
    rw = resolvent(op, w).matrix
    assert maxabs((rz - rw) - (w - z) * rz @ rw) < 1e-9


def test_real_shift_gives_hermitian_resolvent(viola):
    r = resolvent(viola, 5.0).matrix
    assert maxabs(r - r.conj().T) < 1e-10
    assert maxabs(r.imag) < 1e-12


def test_conjugate_shift_is_adjoint(viola):
    z = 0.7 + 1.3j
    a = resolvent(viola, z).matrix
    b = resolvent(viola, np.conj(z)).matrix
    assert maxabs(a.conj().T - b) < 1e-12


# --- contours ----------------------------------------------------------------


def test_contour_node_minimum():
    with pytest.raises(ParameterError):
        Circle(0.0, 1.0, 8)
    with pytest.raises(ParameterError):
        Rectangle(complex(0, 0), complex(1, 1), 8)


def test_contour_validation():
    with pytest.raises(ParameterError):
        Circle(0.0, -1.0, 64)
    with pytest.raises(ParameterError):
        Rectangle(complex(1, 1), complex(0, 2), 64)


def test_circle_weights_integrate_residues():
    c = Circle(-1.0, 1.0, 128)
    got = contour_integral(lambda z: 1.0 / (z + 1.0), c)
    assert abs(got - 2j * np.pi) < 1e-12
    # simple pole of (z-1)/((z+1)(z-2)) at -1 has residue 2/3
    got = contour_integral(lambda z: (z - 1.0) / ((z + 1.0) * (z - 2.0)), c)
    assert abs(got - 2j * np.pi * (2.0 / 3.0)) < 1e-10


def test_rectangle_weights_integrate_residues():
    r = Rectangle(complex(-2, -1), complex(0, 1), 1024)
    got = contour_integral(lambda z: 1.0 / (z + 1.0), r)
    assert abs(got - 2j * np.pi) < 1e-4
    got = contour_integral(lambda z: np.ones_like(z), r)
    assert abs(got) < 1e-12


# --- contour functional calculus ----------------------------------------------


def test_circle_projector(viola):
    got = dunford_apply(viola, lambda z: np.ones_like(z), Circle(-1.0, 1.0, 256))
    assert maxabs(got - P_LOW) < 1e-8


def test_rectangle_projector(viola):
    got = dunford_apply(viola, lambda z: np.ones_like(z),
                        Rectangle(complex(-2, -1), complex(0, 1), 1024))
    assert maxabs(got - P_LOW) < 1e-5


def test_rectangle_projector_refines(viola):
    errs = [
        maxabs(dunford_apply(viola, lambda z: np.ones_like(z),
                             Rectangle(complex(-2, -1), complex(0, 1), n)) - P_LOW)
        for n in (256, 512, 1024)
    ]
    assert errs[0] > errs[1] > errs[2]


def test_identity_function_full_circle_returns_operator(viola):
    got = dunford_apply(viola, lambda z: z, Circle(0.5, 3.0, 256))
    assert maxabs(got - VIOLA) < 1e-10


def test_circle_converges_spectrally(viola):
    errs = [
        maxabs(dunford_apply(viola, lambda z: z, Circle(0.5, 3.0, n)) - VIOLA)
        for n in (32, 48, 64)
    ]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-13


def test_disjoint_circles_add(viola):
    f = np.exp
    low = dunford_apply(viola, f, Circle(-1.0, 0.5, 64))
    high = dunford_apply(viola, f, Circle(2.0, 0.5, 64))
    want = np.exp(-1.0) * P_LOW + np.exp(2.0) * P_HIGH
    assert maxabs((low + high) - want) < 1e-9


def test_contour_too_close(viola):
    with pytest.raises(ContourTooClose):
        dunford_apply(viola, lambda z: np.ones_like(z), Circle(0.5, 3.0, 16))
    with pytest.raises(ContourTooClose):
        dunford_apply(viola, lambda z: np.ones_like(z), Circle(1.95, 0.1, 16))


def test_empty_contour_is_zero(viola):
    got = dunford_apply(viola, lambda z: np.ones_like(z), Circle(10.0, 1.0, 64))
    assert maxabs(got) < 1e-12


# --- Laplace-transform route ---------------------------------------------------


def test_laplace_route_scalar():
    got = hille_yosida_resolvent(d.new_hermitian([[0.0]]), 2j)
    assert abs(got[0, 0] - (-0.5j)) < 1e-8


def test_laplace_route_matches_direct(viola):
    z = 1.0 + 3.0j
    got = hille_yosida_resolvent(viola, z)
    assert maxabs(got - resolvent(viola, z).matrix) < 1e-6


def test_laplace_route_near_axis(viola):
    z = 1.0 + 0.8j
    got = hille_yosida_resolvent(viola, z)
    assert maxabs(got - resolvent(viola, z).matrix) < 1e-5


def test_laplace_route_preconditions(viola):
    with pytest.raises(ParameterError):
        hille_yosida_resolvent(viola, 2.0)  # real shift
    with pytest.raises(ParameterError):
        hille_yosida_resolvent(viola, 1.0 - 1j)  # lower half-plane
    with pytest.raises(ParameterError):
        hille_yosida_resolvent(viola, 2j, t_cut=10.0)  # < 40 / Im z
    with pytest.raises(ParameterError):
        hille_yosida_resolvent(viola, 2j, n_t=8)
