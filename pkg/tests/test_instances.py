import json
from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from bddlat.exact import INF, Magnitude
from bddlat.instances import (
    BddInstance,
    GapCvpInstance,
    InstanceFormatError,
    StBddInstance,
    dumps,
    from_json,
    load,
    loads,
    save,
)
from bddlat.lattice import Basis

rats = st.fractions(min_value=-20, max_value=20, max_denominator=9)
orders = st.sampled_from([F(1), F(3, 2), F(2), F(3), INF])


@st.composite
def bases(draw):
    n = draw(st.integers(1, 3))
    d = draw(st.integers(n, n + 2))
    rows = draw(st.lists(st.lists(rats, min_size=n, max_size=n), min_size=d, max_size=d))
    try:
        return Basis(rows)
    except ValueError:
        assume(False)


@settings(max_examples=80, deadline=None)
@given(bases(), orders, st.data())
def test_round_trip_all_kinds(B, p, data):
    t = tuple(data.draw(st.lists(rats, min_size=B.d, max_size=B.d)))
    g = GapCvpInstance(B, t, p)
    assert loads(dumps(g)) == g
    alpha = Magnitude(p, [(data.draw(st.integers(1, 9)), data.draw(st.fractions(F(1, 9), 3)))])
    r = data.draw(st.fractions(F(1, 9), 5, max_denominator=9))
    s = StBddInstance(B, r, t, alpha, p, {"T": 4})
    back = loads(dumps(s))
    assert back == s and back.meta == {"T": 4}
    b = BddInstance(B, t, alpha, p)
    assert loads(dumps(b)) == b
    assert dumps(loads(dumps(b))) == dumps(b)


def test_rational_strings_preserved(tmp_path):
    g = GapCvpInstance(Basis([["1/3", "0"], ["0", "7/2"]]), (F(1, 7), F(-5, 3)), F(5, 2))
    path = tmp_path / "g.json"
    save(g, path)
    raw = json.loads(path.read_text())
    assert raw["basis"] == [["1/3", "0"], ["0", "7/2"]]
    assert raw["p"] == "5/2"
    assert load(path) == g


def test_r_as_pth_power():
    obj = {"kind": "stbdd", "p": "2", "basis": [["1"]], "target": ["0"],
           "r": {"pth_power": "9/4"}, "alpha": "1"}
    assert from_json(obj).r == F(3, 2)
    obj["r"] = {"pth_power": "2"}
    with pytest.raises(InstanceFormatError):
        from_json(obj)


@pytest.mark.parametrize("obj", [
    {"kind": "cvp", "p": "2", "basis": [["1"]], "target": ["0"]},
    {"kind": "gapcvp", "p": "2", "basis": [["1", "2"], ["3"]], "target": ["0", "0"]},
    {"kind": "gapcvp", "p": "2", "basis": [["1"]], "target": ["0", "1"]},
    {"kind": "gapcvp", "p": "0.5", "basis": [["1"]], "target": ["0"]},
    {"kind": "gapcvp", "p": "2", "basis": [["1", "2"], ["2", "4"]], "target": ["0", "0"]},
    {"kind": "gapcvp", "p": "2", "basis": [["x"]], "target": ["0"]},
    {"kind": "bdd", "p": "2", "basis": [["1"]], "target": ["0"]},
])
def test_malformed_instances(obj):
    with pytest.raises(InstanceFormatError):
        from_json(obj)
