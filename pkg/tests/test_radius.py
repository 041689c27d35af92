import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import two_node
from ebmin import (Network, PathLossModel, PreconditionError, effective_radius,
                   generate_dense, lower_bound_ebn0, tightened_lower_bound, total_gain_from)
from oracles import ref_radius, ref_tightened

LN2 = math.log(2)


def test_total_gain_examples(collinear, model3):
    assert total_gain_from(collinear, model3, 1, [2, 3]) == 1.125
    assert total_gain_from(collinear, model3, 2, [2, 3]) == 1.0
    assert total_gain_from(collinear, model3, 1, [3]) == 0.125


def test_total_gain_rejects_empty(collinear, model3):
    with pytest.raises(PreconditionError):
        total_gain_from(collinear, model3, 1, [])


def test_two_node_radius():
    G, arg = effective_radius(two_node(2.0), PathLossModel(4.0), [2])
    assert G == 2.0**-4 and arg == 1


def test_collinear_radius(collinear, model3):
    G, arg = effective_radius(collinear, model3, [2, 3])
    assert G == 0.5625 and arg == 1


def test_coincident_radius():
    net = Network(np.zeros((3, 2)), 1.0, "dense")
    assert effective_radius(net, PathLossModel(4.0), None) == (1.0, 1)
    assert lower_bound_ebn0(net, PathLossModel(4.0)).lower_bound_ebn0 == LN2


def test_lower_bound_values(collinear, model3):
    r = lower_bound_ebn0(two_node(2.0), PathLossModel(4.0))
    assert math.isclose(r.lower_bound_ebn0, LN2 * 16, rel_tol=1e-15)
    assert math.isclose(r.lower_bound_ebn0, 11.0904, rel_tol=1e-5)
    r = lower_bound_ebn0(collinear, model3)
    assert math.isclose(r.lower_bound_ebn0, LN2 / 0.5625, rel_tol=1e-15)
    assert round(r.lower_bound_ebn0, 5) == 1.23226
    assert r.destination_set_size == 2 and r.argmax_node == 1


def test_collinear_tightened_by_brute_force(collinear, model3):
    # the three subsets give ln2, ln2 and ln2/0.5625; the full set wins
    expect = ref_tightened(collinear.nodes.tolist(), 3.0, 1.0, 1.0, [2, 3])
    assert math.isclose(expect, LN2 / 0.5625)
    for strategy in ("exhaustive", "heuristic"):
        got = tightened_lower_bound(collinear, model3, [2, 3], strategy)
        assert math.isclose(got.lower_bound_ebn0, expect, rel_tol=1e-14)


def test_two_node_tightened_equals_plain():
    net, m = two_node(1.7), PathLossModel(3.0)
    plain = lower_bound_ebn0(net, m).lower_bound_ebn0
    assert tightened_lower_bound(net, m, None, "exhaustive").lower_bound_ebn0 == plain


def test_exhaustive_cap():
    net = generate_dense(22, 10.0, 0)
    with pytest.raises(PreconditionError):
        tightened_lower_bound(net, PathLossModel(), None, "exhaustive")
    tightened_lower_bound(net, PathLossModel(), range(2, 22), "exhaustive")


def test_bad_destinations(collinear, model3):
    for R in ([1], [4], []):
        with pytest.raises(PreconditionError):
            lower_bound_ebn0(collinear, model3, R)


def test_report_invariant(collinear, model3):
    r = lower_bound_ebn0(collinear, model3)
    assert math.isclose(r.lower_bound_ebn0 * r.G, LN2, rel_tol=2e-16)


nets = st.builds(generate_dense, st.integers(2, 14), st.floats(0.05, 60.0), st.integers(0, 2**32))
models = st.builds(lambda a, g: PathLossModel(a, 1.0, g), st.sampled_from([2.5, 3.0, 4.0, 5.3]),
                   st.floats(1.0, 4.0))


@settings(max_examples=80, deadline=None)
@given(nets, models, st.data())
def test_matches_reference(net, model, data):
    R = data.draw(st.lists(st.integers(2, net.k), min_size=1, unique=True))
    G, arg = effective_radius(net, model, R)
    G_ref, arg_ref = ref_radius(net.nodes.tolist(), model.alpha, model.r0, model.gbar, sorted(R))
    assert math.isclose(G, G_ref, rel_tol=1e-12)
    assert arg == arg_ref or math.isclose(
        total_gain_from(net, model, arg, R), total_gain_from(net, model, arg_ref, R), rel_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(nets, models)
def test_tightening_order(net, model):
    plain = lower_bound_ebn0(net, model).lower_bound_ebn0
    heur = tightened_lower_bound(net, model, None, "heuristic").lower_bound_ebn0
    exh = tightened_lower_bound(net, model, None, "exhaustive").lower_bound_ebn0
    assert exh >= heur >= plain
    ref = ref_tightened(net.nodes.tolist(), model.alpha, model.r0, model.gbar,
                        list(range(2, net.k + 1)))
    assert math.isclose(exh, ref, rel_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 30), st.integers(0, 2**32), st.floats(1.0, 5.0), st.sampled_from([2.5, 3.0, 4.0]))
def test_scale_covariance(k, seed, c, alpha):
    rng = np.random.default_rng(seed)
    # distinct lattice sites keep every pair at distance >= 1 = r0
    sites = rng.choice(400, size=k - 1, replace=False) + 1
    pts = np.vstack([[0, 0], np.column_stack([sites % 21, sites // 21])]).astype(float)
    net = Network(pts, 20.0, "regular")
    m = PathLossModel(alpha, 1.0, 1.0)
    G1, _ = effective_radius(net, m)
    G2, _ = effective_radius(net.scaled(c), m)
    assert math.isclose(G2, G1 * c**-alpha, rel_tol=1e-9)
    b1 = lower_bound_ebn0(net, m).lower_bound_ebn0
    b2 = lower_bound_ebn0(net.scaled(c), m).lower_bound_ebn0
    assert math.isclose(b2, b1 * c**alpha, rel_tol=1e-9)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 20), st.integers(0, 2**32), models)
def test_far_node_never_decreases_radius(k, seed, model):
    net = generate_dense(k, 4.0, seed)
    G, _ = effective_radius(net, model)
    far = np.vstack([net.nodes, [[1e6, 1e6]]])
    bigger = Network(far, 1e6, "dense")
    G_far, _ = effective_radius(bigger, model, range(2, k + 1))
    assert G_far >= G
