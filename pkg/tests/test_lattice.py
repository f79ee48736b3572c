import warnings

import pytest

from xxzfloquet.errors import InvalidArgumentError
from xxzfloquet.lattice import (
    LatticeGraph,
    build_chain,
    build_custom,
    build_square,
    check_dynamics_chain,
    neighbor_sum_sites,
)


def test_periodic_chain():
    g = build_chain(6)
    assert g.num_edges == 6
    assert g.is_periodic_chain
    assert all(g.degree(i) == 2 for i in range(6))
    assert g.has_edge(5, 0) and g.has_edge(0, 5)
    assert g.adjacency[0] == (1, 5)


def test_open_chain():
    g = build_chain(4, periodic=False)
    assert g.edges == ((0, 1), (1, 2), (2, 3))
    assert not g.is_periodic_chain
    assert g.degree(0) == 1


@pytest.mark.parametrize("length,periodic", [(2, True), (1, False), (0, True)])
def test_chain_too_short(length, periodic):
    with pytest.raises(InvalidArgumentError):
        build_chain(length, periodic)


def test_square_lattice():
    g = build_square(3, 3)
    assert g.num_sites == 9
    assert g.num_edges == 18
    assert all(g.degree(i) == 4 for i in range(9))
    # site = x + lx * y
    assert g.has_edge(0, 1) and g.has_edge(0, 3) and g.has_edge(0, 2) and g.has_edge(0, 6)
    open_g = build_square(3, 2, periodic=False)
    assert open_g.num_edges == 7


def test_custom_and_validation():
    g = build_custom(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
    assert g.kind == "custom"
    assert g.degree(0) == 3
    with pytest.raises(InvalidArgumentError):
        build_custom(3, [(0, 0)])
    with pytest.raises(InvalidArgumentError):
        build_custom(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidArgumentError):
        build_custom(3, [(0, 3)])
    with pytest.raises(InvalidArgumentError):
        LatticeGraph(0, ())


def test_neighbor_sum_sites():
    g = build_chain(8)
    ni, nj = neighbor_sum_sites(g, 3, 4)
    assert set(ni) == {2, 4} and set(nj) == {3, 5}
    with pytest.raises(InvalidArgumentError):
        neighbor_sum_sites(g, 0, 3)


def test_short_dynamics_chain_warns():
    with pytest.warns(UserWarning):
        check_dynamics_chain(build_chain(4))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        check_dynamics_chain(build_chain(6))
