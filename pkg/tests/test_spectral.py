"""Domain geometry, cosine transforms, and mode bookkeeping."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nrd import (
    Domain1D,
    ModeSpectrum,
    decompose,
    dominant_mode,
    eigenfunction,
    eigenvalue,
    reconstruct,
    spatial_average,
)
from nrd.errors import LengthMismatch


def test_cell_centered_grid():
    dom = Domain1D(l=2.0, N=64)
    assert dom.length == pytest.approx(2 * np.pi, abs=0)
    assert dom.h == pytest.approx(dom.length / 64, abs=0)
    assert dom.x[0] == pytest.approx(dom.h / 2)
    assert dom.x[-1] == pytest.approx(dom.length - dom.h / 2)
    np.testing.assert_allclose(np.diff(dom.x), dom.h)


def test_domain_validation():
    with pytest.raises(ValueError):
        Domain1D(l=0.0)
    with pytest.raises(ValueError):
        Domain1D(l=-1.0)
    with pytest.raises(ValueError):
        Domain1D(l=1.0, N=8)


def test_eigenvalue_closed_form():
    dom = Domain1D(l=3.0, N=32)
    for i in range(8):
        assert eigenvalue(dom, i) == (i / 3.0) ** 2
    with pytest.raises(ValueError):
        eigenvalue(dom, -1)


def test_eigenfunctions_discretely_orthogonal():
    dom = Domain1D(l=1.7, N=48)
    F = np.stack([eigenfunction(dom, i) for i in range(dom.N)])
    G = F @ F.T * (2.0 / dom.N)
    G[0] *= 0.5  # the constant mode carries double weight
    np.testing.assert_allclose(G, np.eye(dom.N), atol=1e-12)


def test_nonconstant_modes_average_to_zero():
    dom = Domain1D(l=0.5, N=40)
    for i in range(1, 12):
        assert abs(spatial_average(eigenfunction(dom, i), dom)) < 1e-13


def test_spatial_average_is_midpoint_mean():
    dom = Domain1D(l=1.0, N=16)
    f = np.random.default_rng(0).normal(size=16)
    assert spatial_average(f, dom) == f.mean()


@given(
    i=st.integers(min_value=0, max_value=31),
    amp=st.floats(min_value=-5, max_value=5),
    l=st.floats(min_value=0.2, max_value=8),
)
def test_single_mode_round_trip(i, amp, l):
    dom = Domain1D(l=l, N=32)
    coeffs = decompose(amp * eigenfunction(dom, i), dom).amplitudes
    expected = np.zeros(32)
    expected[i] = amp
    np.testing.assert_allclose(coeffs, expected, atol=1e-10)


@given(st.lists(st.floats(min_value=-2, max_value=2), min_size=1, max_size=24))
def test_reconstruct_then_decompose_is_identity(coeffs):
    dom = Domain1D(l=1.3, N=24)
    field = reconstruct(ModeSpectrum(np.array(coeffs)), dom)
    back = decompose(field, dom).amplitudes
    np.testing.assert_allclose(back[: len(coeffs)], coeffs, atol=1e-10)
    np.testing.assert_allclose(back[len(coeffs):], 0, atol=1e-10)


@given(st.data())
def test_decompose_then_reconstruct_is_identity(data):
    dom = Domain1D(l=2.4, N=32)
    field = np.array(
        data.draw(
            st.lists(
                st.floats(min_value=-3, max_value=3), min_size=32, max_size=32
            )
        )
    )
    np.testing.assert_allclose(
        reconstruct(decompose(field, dom), dom), field, atol=1e-9
    )


def test_length_mismatch_raises():
    dom = Domain1D(l=1.0, N=32)
    with pytest.raises(LengthMismatch):
        spatial_average(np.zeros(31), dom)
    with pytest.raises(LengthMismatch):
        decompose(np.zeros(33), dom)
    with pytest.raises(LengthMismatch):
        reconstruct(ModeSpectrum(np.zeros(40)), dom)


def test_dominant_mode_threshold():
    amps = np.zeros(10)
    amps[0], amps[3] = 1.0, 0.05
    assert dominant_mode(ModeSpectrum(amps)) == 3
    amps[3] = 0.01  # below the 2% relative floor
    assert dominant_mode(ModeSpectrum(amps)) is None
    assert dominant_mode(ModeSpectrum(amps), threshold=0.005) == 3


def test_dominant_mode_uses_unit_floor_for_small_means():
    # comparison level is max(1, |c0|): a uniformly tiny field reads as flat
    amps = np.zeros(6)
    amps[0], amps[2] = 1e-6, 1e-3
    assert dominant_mode(ModeSpectrum(amps)) is None


def test_dominant_mode_trivial_spectrum():
    assert dominant_mode(ModeSpectrum(np.array([3.0]))) is None
