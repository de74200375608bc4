import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qtanner.groups import (
    DihedralGroup,
    GeneratorSet,
    GroupError,
    check_tnc,
    sample_symmetric_generators,
    sample_tnc_pair,
)


def test_d4_rotation_inverse():
    g = DihedralGroup(4)
    r, r3 = g.parse_element("r"), g.parse_element("r^3")
    assert g.multiply(r, r3) == g.identity


def test_d4_conjugation_relation():
    # s r s = r^-1 = r^3
    g = DihedralGroup(4)
    s, r = g.parse_element("s"), g.parse_element("r")
    assert g.multiply(g.multiply(s, r), s) == g.parse_element("r^3")


def test_enumerate_orders():
    assert len(DihedralGroup(4).elements()) == 8
    assert len(DihedralGroup(10).elements()) == 20


@given(st.integers(2, 9), st.data())
@settings(max_examples=80, deadline=None)
def test_group_axioms(n, data):
    g = DihedralGroup(n)
    x = data.draw(st.integers(0, g.order - 1))
    y = data.draw(st.integers(0, g.order - 1))
    z = data.draw(st.integers(0, g.order - 1))
    assert g.multiply(g.multiply(x, y), z) == g.multiply(x, g.multiply(y, z))
    assert g.multiply(x, g.invert(x)) == g.identity
    assert g.multiply(g.invert(x), x) == g.identity
    assert g.multiply(x, g.identity) == x


def test_element_names_round_trip():
    g = DihedralGroup(6)
    for x in g.elements():
        assert g.parse_element(g.element_name(x)) == x
    assert g.element_name(0) == "e"
    assert g.element_name(1) == "r"
    assert g.element_name(6) == "s"
    assert g.element_name(7) == "sr"
    assert g.element_name(9) == "sr^3"


def test_generator_set_invariants():
    g = DihedralGroup(4)
    with pytest.raises(GroupError):
        GeneratorSet(g, (0, 1))  # identity not allowed
    with pytest.raises(GroupError):
        GeneratorSet(g, (1,))  # r without r^-1
    ok = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    assert ok.delta == 3
    assert ok.names() == ["s", "r", "r^3"]


def test_sample_odd_delta_contains_involution():
    g = DihedralGroup(6)  # order 12
    rng = np.random.default_rng(0)
    gs = sample_symmetric_generators(g, 3, rng)
    assert any(g.is_involution(x) for x in gs.elements)


def test_sample_delta_at_half_order_errors():
    g = DihedralGroup(4)
    with pytest.raises(GroupError, match="delta < \\|G\\|/2"):
        sample_symmetric_generators(g, 4, np.random.default_rng(0))


def test_sample_odd_n_odd_delta_errors():
    g = DihedralGroup(5)
    with pytest.raises(GroupError, match="conjugate"):
        sample_symmetric_generators(g, 3, np.random.default_rng(0))


def test_sample_deterministic_under_seed():
    g = DihedralGroup(8)
    a = sample_symmetric_generators(g, 4, np.random.default_rng(42))
    b = sample_symmetric_generators(g, 4, np.random.default_rng(42))
    assert a.elements == b.elements


@given(st.integers(3, 10), st.integers(2, 5), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_sample_output_satisfies_invariants(n, delta, seed):
    g = DihedralGroup(n)
    if delta >= g.order // 2 or (n % 2 == 1 and delta % 2 == 1):
        return
    gs = sample_symmetric_generators(g, delta, np.random.default_rng(seed))
    assert gs.delta == delta  # GeneratorSet.__post_init__ checks the rest


def test_tnc_shared_element_violates_at_identity():
    g = DihedralGroup(4)
    a = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    b = GeneratorSet.from_names(g, ["s", "r^2"])
    witness = check_tnc(g, a, b)
    assert witness is not None
    assert witness[2] == g.identity
    assert witness[0] == witness[1] == g.parse_element("s")


def test_tnc_reference_36_qubit_sets_pass():
    g = DihedralGroup(4)
    a = GeneratorSet.from_names(g, ["s", "r", "r^3"])
    b = GeneratorSet.from_names(g, ["sr", "sr^3", "r^2"])
    assert check_tnc(g, a, b) is None


def test_tnc_odd_n_odd_delta_always_violated():
    # Symmetric odd-size sets in D_n (n odd) each contain a reflection and
    # all reflections are conjugate, so some g conjugates one to the other.
    g = DihedralGroup(5)
    a = GeneratorSet.from_names(g, ["s", "r", "r^4"])
    b = GeneratorSet.from_names(g, ["sr", "r^2", "r^3"])
    assert check_tnc(g, a, b) is not None


def test_tnc_witness_is_a_conjugacy_witness():
    g = DihedralGroup(5)
    a = GeneratorSet.from_names(g, ["s", "r", "r^4"])
    b = GeneratorSet.from_names(g, ["sr", "r^2", "r^3"])
    wa, wb, wg = check_tnc(g, a, b)
    # a*g = g*b  <=>  g^-1 a g = b
    assert g.multiply(g.multiply(g.invert(wg), wa), wg) == wb


def test_sample_tnc_pair():
    g = DihedralGroup(6)
    rng = np.random.default_rng(1)
    a, b = sample_tnc_pair(g, 3, rng)
    assert check_tnc(g, a, b) is None
    assert a.delta == b.delta == 3


def test_sample_tnc_pair_exhausts_retries():
    g = DihedralGroup(4)
    rng = np.random.default_rng(0)
    with pytest.raises(GroupError, match="attempts"):
        # delta=3 on D_4 is feasible, so force failure with zero retries.
        sample_tnc_pair(g, 3, rng, max_retries=0)
