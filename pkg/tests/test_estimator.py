from fractions import Fraction

import pytest

from fattree_design.designer import DesignRequest, InsufficientRadixError, design
from fattree_design.estimator import (
    exactness_condition,
    lower_bound_estimate,
    median_gap,
    single_model_catalog,
    sweep_lower_bound,
)


@pytest.mark.parametrize(
    "nodes,expected",
    [(648, 1), (324, 2), (216, 3), (108, 6), (72, 9), (60, None), (100, None), (36, None)],
)
def test_exactness_condition(nodes, expected):
    assert exactness_condition(nodes, 36) == expected


def test_exactness_condition_matches_enumeration():
    # oracle: X is valid iff N*X recovers the full capacity and X is either 1
    # or a proper non-trivial divisor of half the port count
    ports = 36
    capacity = ports * ports // 2
    half = ports // 2
    for nodes in range(1, capacity + 1):
        expected = None
        for factor in range(1, half):
            if nodes * factor == capacity and (factor == 1 or half % factor == 0):
                expected = factor
                break
        assert exactness_condition(nodes, ports) == expected, nodes


def test_exactness_condition_validates_ports():
    with pytest.raises(ValueError):
        exactness_condition(10, 35)
    with pytest.raises(ValueError):
        exactness_condition(1, 2)


def test_estimate_full_population(ft36):
    estimate = lower_bound_estimate(648, ft36, 8000)
    assert estimate.total_ports == 1944
    assert estimate.rack_units == 54
    assert estimate.exact and estimate.bundle_factor == 1
    assert estimate.switch_cost == Fraction(59_400_000)  # exact $594,000
    assert estimate.quoted_switch_cost == 59_486_400  # $306/port quote
    assert estimate.quoted_power_watts == Fraction(820_368, 100)  # 4.22 W/port quote
    assert estimate.power_watts == Fraction(8208)
    assert estimate.cable_count == 1296


def test_estimate_blade_skips_node_cables(ft36):
    estimate = lower_bound_estimate(72, ft36, 8000, blade=True)
    assert estimate.cable_count == 72


def test_estimate_rejects_oversized_cluster(ft36):
    with pytest.raises(InsufficientRadixError):
        lower_bound_estimate(649, ft36, 8000)


def test_estimate_matches_design_at_exact_points(ft36, ft36_catalog):
    for nodes in (72, 108):
        estimate = lower_bound_estimate(nodes, ft36, 8000)
        actual = design(DesignRequest(node_count=nodes), ft36_catalog).winner
        assert estimate.exact
        assert estimate.est_cost == actual.metrics.cost
        assert estimate.cable_count == actual.cable_count


def test_estimate_below_design_elsewhere(ft36, ft36_catalog):
    estimate = lower_bound_estimate(100, ft36, 8000)
    actual = design(DesignRequest(node_count=100), ft36_catalog).winner
    assert not estimate.exact
    assert estimate.est_cost < actual.metrics.cost


def test_sweep_points_and_median(ft36):
    points = sweep_lower_bound(ft36, 70, 74, 8000)
    assert [p.node_count for p in points] == [70, 71, 72, 73, 74]
    by_nodes = {p.node_count: p for p in points}
    assert by_nodes[72].exact and by_nodes[72].gap == 0
    assert all(p.estimate_cost <= p.actual_cost for p in points)
    assert Fraction(0) <= median_gap(points) < Fraction(1)
    with pytest.raises(ValueError):
        sweep_lower_bound(ft36, 1, 0, 8000)
    with pytest.raises(ValueError):
        median_gap([])


def test_full_population_switch_counts(ft36_catalog):
    # at maximum capacity every port is in use: three per node, with as many
    # edge switches as ports and half as many core switches
    full = design(DesignRequest(node_count=648), ft36_catalog).winner
    assert full.edge_count == 36
    assert full.core_count == 18
    assert full.switch_count * 36 == 3 * 648


def test_single_model_catalog_has_both_roles(ft36):
    catalog = single_model_catalog(ft36)
    assert catalog.edge_set == catalog.core_set
    assert catalog.edge_set[0].roles == frozenset({"edge", "core"})
