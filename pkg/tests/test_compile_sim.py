import pytest
from hypothesis import given
from hypothesis import strategies as st

from graphbatch import CostModel, ShapeKey, ShapeRegistry, record_step, recompilation_count, simulate_update_cost
from graphbatch.errors import OutOfOrderStep


def test_record_step_first_and_repeat():
    reg = ShapeRegistry()
    assert record_step(reg, 0, ShapeKey(1024, 4096, 32)) is True
    assert record_step(reg, 1, ShapeKey(1024, 4096, 32)) is False


def test_record_sequence_against_set_oracle():
    a, b, c = ShapeKey(64, 64, 2), ShapeKey(128, 64, 2), ShapeKey(64, 128, 2)
    seq = [a, a, b, a, c]
    reg = ShapeRegistry()
    flags = [record_step(reg, i, s) for i, s in enumerate(seq)]
    seen, oracle = set(), []
    for s in seq:
        oracle.append(s not in seen)
        seen.add(s)
    assert flags == oracle == [True, False, True, False, True]
    assert reg.compile_count == 3
    assert [step for step, _ in reg.events] == [0, 2, 4]


def test_out_of_order_step():
    reg = ShapeRegistry()
    record_step(reg, 5, ShapeKey(64, 64, 2))
    with pytest.raises(OutOfOrderStep):
        record_step(reg, 5, ShapeKey(64, 64, 2))
    with pytest.raises(OutOfOrderStep):
        record_step(reg, 3, ShapeKey(64, 64, 2))


def test_recompilation_count():
    reg = ShapeRegistry()
    assert recompilation_count(reg) == 0
    record_step(reg, 0, ShapeKey(64, 64, 2))
    assert recompilation_count(reg) == 0
    for i in range(1, 5):
        record_step(reg, i, ShapeKey(64 * (i + 1), 64, 2))
    assert recompilation_count(reg) == 4


def test_events_csv(tmp_path):
    reg = ShapeRegistry()
    record_step(reg, 0, ShapeKey(64, 64, 2))
    record_step(reg, 3, ShapeKey(128, 64, 2))
    path = tmp_path / "events.csv"
    reg.write_csv(path)
    assert path.read_text().splitlines() == [
        "step_index,padded_nodes,padded_edges,num_graphs", "0,64,64,2", "3,128,64,2"]


def test_simulate_update_cost():
    model = CostModel(1, 0.01, 0.001, 50)
    shape = ShapeKey(100, 200, 4)
    assert simulate_update_cost(shape, model, True) == pytest.approx(1 + 1 + 0.2 + 50)
    assert simulate_update_cost(shape, model, False) == pytest.approx(2.2)
    assert simulate_update_cost(shape, CostModel(0, 0, 0, 0), True) == 0


def test_cost_model_rejects_negative():
    with pytest.raises(ValueError):
        CostModel(node_cost=-1)


coef = st.floats(0, 1e3)


@given(st.integers(1, 10**5), st.integers(0, 10**6), st.integers(0, 10**5), st.integers(0, 10**6),
       coef, coef, coef, coef, st.booleans())
def test_cost_monotone(n, e, dn, de, base, nc, ec, pen, new):
    model = CostModel(base, nc, ec, pen)
    lo = simulate_update_cost(ShapeKey(n, e, 2), model, new)
    assert simulate_update_cost(ShapeKey(n + dn, e + de, 2), model, new) >= lo
    bigger = CostModel(base + 1, nc + 1, ec + 1, pen + 1)
    assert simulate_update_cost(ShapeKey(n, e, 2), bigger, new) >= lo
