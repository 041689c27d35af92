import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import two_node
from ebmin import (FloodParams, PathLossModel, PreconditionError, coverage_fraction,
                   generate_dense, lower_bound_ebn0, simulate_flood)
from ebmin.flood import NEVER, TRACE_COLUMNS, trace_to_csv
from oracles import ref_flood

LN2 = math.log(2)


def test_single_hop(model4):
    tr = simulate_flood(two_node(1.0), model4, FloodParams(1.01 * LN2, 0.0, 2))
    assert tr.decode_slot.tolist() == [0, 1]
    assert tr.covered and tr.total_energy_per_bit == 1.01 * LN2
    assert math.isclose(tr.accum_energy[1], 1.01 * LN2)


def test_threshold_is_strict(model4):
    tr = simulate_flood(two_node(1.0), model4, FloodParams(LN2, 0.0, 2))
    assert not tr.covered
    assert tr.decode_slot[1] == NEVER
    assert coverage_fraction(tr) == 0.0


def test_collinear_relay(collinear, model3):
    tr = simulate_flood(collinear, model3, FloodParams(1.01 * LN2, 0.9 * LN2, 3))
    assert tr.decode_slot.tolist() == [0, 1, 2]
    assert tr.transmit_slot.tolist() == [1, 2, 3]
    assert math.isclose(tr.accum_energy[2], (1.01 / 8 + 0.9) * LN2)
    assert tr.covered and coverage_fraction(tr) == 1.0
    # node 3 also relays, nobody is left to hear it
    assert math.isclose(tr.total_energy_per_bit, (1.01 + 2 * 0.9) * LN2)


def test_collinear_no_relay(collinear, model3):
    tr = simulate_flood(collinear, model3, FloodParams(1.01 * LN2, 0.0, 3))
    assert coverage_fraction(tr) == 0.5
    assert math.isclose(tr.accum_energy[2], 1.01 * LN2 / 8)
    assert tr.total_energy_per_bit == 1.01 * LN2


def test_slot_limit_stops_relays(collinear, model3):
    tr = simulate_flood(collinear, model3, FloodParams(1.01 * LN2, 0.9 * LN2, 1))
    assert tr.decode_slot.tolist() == [0, 1, NEVER]
    assert tr.transmit_slot.tolist() == [1, NEVER, NEVER]


@pytest.mark.parametrize("args", [(0.0, 1.0, 1), (1.0, -0.1, 1), (1.0, 1.0, 0)])
def test_params_validated(args):
    with pytest.raises(PreconditionError):
        FloodParams(*args)


def test_trace_csv(collinear, model3):
    tr = simulate_flood(collinear, model3, FloodParams(1.01 * LN2, 0.0, 3))
    rows = list(csv.reader(io.StringIO(trace_to_csv(collinear, tr))))
    assert tuple(rows[0]) == TRACE_COLUMNS
    assert rows[3][3] == "" and rows[3][4] == ""
    assert float(rows[2][5]) == tr.accum_energy[1]


flood_cases = st.tuples(
    st.integers(2, 40), st.floats(0.1, 50.0), st.integers(0, 2**32),
    st.sampled_from([2.5, 3.0, 4.0]), st.floats(0.2, 30.0), st.floats(0.0, 10.0),
    st.integers(1, 12),
)


def _run(case):
    k, area, seed, alpha, e1, e2, T = case
    net = generate_dense(k, area, seed)
    model = PathLossModel(alpha, 1.0, 1.0)
    return net, model, FloodParams(e1 * LN2, e2 * LN2, T)


@settings(max_examples=150, deadline=None)
@given(flood_cases)
def test_trace_invariants(case):
    net, model, p = _run(case)
    tr = simulate_flood(net, model, p)
    dec, tx = tr.decode_slot, tr.transmit_slot
    assert dec[0] == 0 and tx[0] == 1
    relays = (tx != NEVER)[1:]
    # transmit at most once, right after decoding, never past T
    assert np.all(tx[1:][relays] == dec[1:][relays] + 1)
    assert np.all(tx <= p.max_slots)
    assert np.all(dec[1:][dec[1:] != NEVER] >= 1)
    assert math.isclose(tr.total_energy_per_bit, p.eb1 + p.eb2 * relays.sum())
    assert tr.total_energy_per_bit <= p.eb1 + (net.k - 1) * p.eb2 * (1 + 1e-15)
    assert simulate_flood(net, model, p) == tr
    if tr.covered:
        bound = lower_bound_ebn0(net, model).lower_bound_ebn0
        assert tr.total_energy_per_bit > bound * (1 - 1e-12)


@settings(max_examples=100, deadline=None)
@given(flood_cases, st.floats(1.0, 3.0), st.floats(1.0, 3.0))
def test_more_energy_never_hurts(case, up1, up2):
    net, model, p = _run(case)
    low = simulate_flood(net, model, p).decode_slot
    high = simulate_flood(net, model, FloodParams(p.eb1 * up1, p.eb2 * up2, p.max_slots)).decode_slot
    reached = low != NEVER
    assert np.all(high[reached] != NEVER)
    assert np.all(high[reached] <= low[reached])


@settings(max_examples=100, deadline=None)
@given(flood_cases.filter(lambda c: c[0] <= 10))
def test_matches_reference(case):
    net, model, p = _run(case)
    tr = simulate_flood(net, model, p)
    dec, total = ref_flood(net.nodes.tolist(), model.alpha, model.r0, model.gbar,
                           p.eb1, p.eb2, p.max_slots)
    assert [None if d == NEVER else d for d in tr.decode_slot.tolist()] == dec
    assert math.isclose(tr.total_energy_per_bit, total, rel_tol=1e-12)
