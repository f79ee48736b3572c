import numpy as np
import pytest

from conftest import make_model
from xxzfloquet.errors import InvalidArgumentError, ResourceError
from xxzfloquet.floquet_average import RotatingFrame, effective_deviation
from xxzfloquet.hilbert import SpinBasis, StateVector
from xxzfloquet.lattice import build_chain, build_custom, build_square
from xxzfloquet.operators import DrivenXXZ, ModelParams, build_dense


@pytest.mark.parametrize(
    "graph,two_s,a",
    [
        (build_chain(5, periodic=False), 1, 1.7),
        (build_square(2, 3, periodic=False), 1, 2.2),
        (build_custom(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), 1, 0.9),
        (build_chain(3, periodic=True), 2, 1.4),
        (build_chain(3, periodic=False), 3, 0.6),
    ],
)
def test_average_matches_closed_form_on_general_lattices(graph, two_s, a):
    model = DrivenXXZ(graph, SpinBasis(graph.num_sites, two_s), ModelParams(0.7, -0.4, 3.0, a))
    assert effective_deviation(model, a) < 1e-12


def test_conjugated_and_dressed_forms_agree(rng):
    model = make_model(6, a=2.1)
    frame = RotatingFrame(model)
    psi = StateVector.random(model.basis, rng)
    for t in rng.uniform(0, model.params.period, 5):
        lhs = frame.conjugated_h0_apply(t, psi).amplitudes
        rhs = frame.closed_form_apply(t, psi).amplitudes
        assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_frame_is_identity_at_stroboscopic_times():
    model = make_model(6)
    frame = RotatingFrame(model)
    assert np.allclose(frame.phases(model.params.period), 1.0, atol=1e-13)
    assert frame.u_phase(0.0, 5) == 1.0
    t = 0.1
    assert frame.u_phase(t, 7) == pytest.approx(frame.phases(t)[7], abs=1e-15)


def test_zero_amplitude_average_is_h0():
    model = make_model(4, a=0.0)
    avg = RotatingFrame(model).average_dense(0.0)
    assert np.max(np.abs(avg - build_dense(model.handle("H0")))) < 1e-14


def test_average_is_deterministic_and_hermitian():
    model = make_model(6)
    frame = RotatingFrame(model)
    first = frame.average_dense(1.1)
    assert np.array_equal(first, frame.average_dense(1.1))
    assert np.max(np.abs(first - first.conj().T)) < 1e-14


def test_too_few_nodes_fail_loudly():
    model = make_model(4)
    with pytest.raises(InvalidArgumentError):
        effective_deviation(model, 1.0, nodes=16)
    with pytest.raises(ResourceError):
        RotatingFrame(model).average_dense(1.0, max_dim=8)


def test_coarse_quadrature_misses_large_arguments():
    # exp(-i a z sin) carries Fourier modes up to about a|z| = 40 here
    model = make_model(6)
    assert effective_deviation(model, 20.0, nodes=32) > 1e-6
    assert effective_deviation(model, 20.0, nodes=128) < 1e-12
