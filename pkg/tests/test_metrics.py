import numpy as np
import pytest
from hypothesis import given, strategies as st

from srs.metrics import (
    STEP_HEADER,
    RunSummary,
    StepRecord,
    record_step,
    records_from_csv,
    records_to_csv,
    reaction_times,
    success_rate,
    summarize,
    summary_row,
    summary_to_csv,
)


def rec(t, captured, epoch=0, pop=10):
    return StepRecord(t, pop, 1.0, 0.5, captured, epoch)


def test_record_step_at_optimum():
    r = record_step(np.zeros(5), 3, 0.0, maximize=False, epoch=1)
    assert (r.t, r.population, r.best_value, r.mean_altitude, r.captured, r.epoch) == (3, 5, 0.0, 0.0, True, 1)


def test_record_step_empty():
    r = record_step(np.array([]), 0, 0.0, maximize=False)
    assert r.population == 0 and not r.captured
    assert r.mean_altitude is None and r.best_value is None


def test_record_step_orientation():
    z = np.array([3.0, 1.0, 2.0])
    assert record_step(z, 0, 0.0, maximize=False).best_value == 1.0
    assert record_step(z, 0, 0.0, maximize=True).best_value == 3.0


@given(
    st.lists(st.floats(-100, 100), min_size=1, max_size=30),
    st.floats(-100, 100),
    st.booleans(),
    st.floats(0, 10),
    st.floats(0, 10),
)
def test_record_step_properties(values, opt, maximize, eps, extra):
    r = record_step(np.array(values), 0, opt, maximize, eps=eps)
    if maximize:
        assert r.best_value >= r.mean_altitude - 1e-9
    else:
        assert r.best_value <= r.mean_altitude + 1e-9
    if r.captured:
        assert record_step(np.array(values), 0, opt, maximize, eps=eps + extra).captured


def test_success_rate_examples():
    assert success_rate([rec(t, True) for t in range(10)]) == 1.0
    assert success_rate([rec(t, False) for t in range(10)]) == 0.0
    assert success_rate([rec(t, t < 65) for t in range(100)]) == 0.65
    with pytest.raises(ValueError):
        success_rate([])


def test_reaction_times():
    records = [rec(t, t in (5, 9, 14)) for t in range(20)]
    # changes at 5, 10, 15: immediate, recaptured 4 later, never
    assert reaction_times(records, [5, 10, 15]) == [0, 4, None]
    s = summarize(records, [5, 10, 15])
    assert s.uncensored_reactions == [0, 4]
    assert s.censored_count == 1
    assert s.median_reaction == 2.0
    assert summarize(records, []).median_reaction is None


def test_csv_round_trip():
    records = [
        StepRecord(0, 3, 1.0 / 3.0, 0.123456789012, True, 0),
        StepRecord(1, 0, None, None, False, 1),
    ]
    text = records_to_csv(records)
    lines = text.splitlines()
    assert lines[0] == ",".join(STEP_HEADER)
    assert lines[1] == "0,3,0.333333333,0.123456789,1,0"
    assert lines[2] == "1,0,,,0,1"
    back = records_from_csv(text)
    assert back[1] == records[1]
    assert back[0].mean_altitude == pytest.approx(1 / 3, rel=1e-9)
    with pytest.raises(ValueError):
        records_from_csv("a,b\n1,2\n")


def test_summary_csv():
    s = RunSummary(0.5, [3, None], [rec(0, True, pop=7), rec(1, False, pop=9)])
    row = summary_row("x_r00", 42, "ackley-speed", 1.5, s)
    assert row == ["x_r00", "42", "ackley-speed", "1.5", "0.5", "3", "9"]
    text = summary_to_csv([row])
    assert text.splitlines()[0] == "run_id,seed,preset,param,success_rate,median_reaction,final_population"
