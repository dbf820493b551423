"""The ten acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import pytest

from gaugelie.acceptance import CRITERIA, Context, run_criterion


@pytest.fixture(scope="module")
def state():
    return {"ctx": Context(seed=0), "done": {}}


def _run(state, number):
    if number not in state["done"]:
        state["done"][number] = run_criterion(number, state["ctx"])
    return state["done"][number]


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA])
def test_criterion(number, state, capsys):
    if number == 10:
        # criterion 10 consumes the morphisms collected by the others
        for n in range(1, 10):
            _run(state, n)
    outcome = _run(state, number)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.line()
