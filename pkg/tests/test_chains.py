"""Transition systems: rates, structure, stochasticity, export formats."""

import json
from fractions import Fraction

import pytest

from dasep import (
    BivarPoly,
    CbpState,
    Partition,
    build_cbp,
    build_dasep,
    build_rrg,
    check_irreducible,
    check_stochastic,
    cyclic_orbits,
    decompose,
    export_dot,
    matrix_json,
    parse_poly,
    parse_word,
)
from dasep.chains import TransitionSystem, rotate_state
from dasep.errors import InvalidParams, NotStochastic

GRID = [
    (n, p, q)
    for n in range(2, 7)
    for p in range(1, 4)
    for q in range(1, 4)
    if n > q
]


def rate(system, a, b):
    return system.scaled_rates.get((system.index[a], system.index[b]), BivarPoly())


# ---------------------------------------------------------------------------
# small chains against hand-computed rates


def test_two_site_chain_doubles_the_shared_pair():
    sys_ = build_dasep(2, 2, 1)
    one_plus_t = parse_poly("t + 1")
    # interior pair and wrap pair coincide at n=2; rates add
    assert rate(sys_, parse_word("01"), parse_word("10")) == one_plus_t
    assert rate(sys_, parse_word("10"), parse_word("01")) == one_plus_t
    assert rate(sys_, parse_word("01"), parse_word("02")) == parse_poly("u")
    assert rate(sys_, parse_word("02"), parse_word("01")) == parse_poly("1")
    assert sys_.doubled_pair_note is not None
    assert build_dasep(3, 2, 1).doubled_pair_note is None


def test_three_site_swap_rates():
    sys_ = build_dasep(3, 2, 1)
    # a particle moves left past a smaller letter at rate 1, right at rate t
    assert rate(sys_, parse_word("010"), parse_word("100")) == parse_poly("1")
    assert rate(sys_, parse_word("010"), parse_word("001")) == parse_poly("t")
    # wrap move: last letter and first letter swap
    assert rate(sys_, parse_word("001"), parse_word("100")) == parse_poly("t")
    assert rate(sys_, parse_word("100"), parse_word("001")) == parse_poly("1")


def test_species_moves():
    sys_ = build_dasep(3, 3, 2)
    assert rate(sys_, parse_word("012"), parse_word("022")) == parse_poly("u")
    assert rate(sys_, parse_word("012"), parse_word("013")) == parse_poly("u")
    assert rate(sys_, parse_word("013"), parse_word("012")) == parse_poly("1")
    # top species cannot rise, species 1 cannot fall: every move out of 013
    # keeps two particles and letters within 1..3
    i = sys_.index[parse_word("013")]
    targets = {sys_.state_str(j) for j, _ in sys_.out_edges(i)}
    assert targets == {"012", "023", "031", "103", "310"}


def test_cbp_word_and_shape_moves():
    sys_ = build_cbp(4, 2, 2)
    l11 = Partition((1, 1))
    l21 = Partition((2, 1))
    l22 = Partition((2, 2))
    w = parse_word("0101")
    # interior swap of the pair at positions (1,2)
    assert rate(sys_, CbpState(w, l11), CbpState(parse_word("1001"), l11)) == parse_poly("1")
    # wrap swap of the pair (last, first)
    assert rate(sys_, CbpState(w, l11), CbpState(parse_word("1100"), l11)) == parse_poly("t")
    # shape moves carry multiplicities
    assert rate(sys_, CbpState(w, l11), CbpState(w, l21)) == parse_poly("2*u")
    assert rate(sys_, CbpState(w, l21), CbpState(w, l11)) == parse_poly("1")
    assert rate(sys_, CbpState(w, l21), CbpState(w, l22)) == parse_poly("u")
    assert rate(sys_, CbpState(w, l22), CbpState(w, l21)) == parse_poly("2")


def test_rrg_square_diagram():
    sys_ = build_rrg(3, 2, 2)
    l11, l21, l22 = Partition((1, 1)), Partition((2, 1)), Partition((2, 2))
    assert [sys_.state_str(i) for i in range(sys_.size)] == ["(1,1)", "(2,1)", "(2,2)"]
    assert rate(sys_, l11, l21) == parse_poly("2*u")
    assert rate(sys_, l21, l11) == parse_poly("1")
    assert rate(sys_, l21, l22) == parse_poly("u")
    assert rate(sys_, l22, l21) == parse_poly("2")
    assert (sys_.index[l11], sys_.index[l22]) not in sys_.scaled_rates


def test_single_species_has_no_shape_moves():
    sys_ = build_rrg(4, 1, 2)
    assert sys_.size == 1
    assert sys_.scaled_rates == {}


def test_builders_validate_params():
    with pytest.raises(InvalidParams):
        build_dasep(2, 2, 2)
    with pytest.raises(InvalidParams):
        build_rrg(3, 2, 3)


# ---------------------------------------------------------------------------
# structural invariants across the whole grid


@pytest.mark.parametrize("n,p,q", GRID)
def test_dasep_moves_conserve_particles(n, p, q, systems):
    sys_ = systems("dasep", n, p, q)
    for (i, j) in sys_.scaled_rates:
        a, b = sys_.states[i], sys_.states[j]
        assert sum(1 for x in a if x) == sum(1 for x in b if x)
        # a single move changes the word by a swap or one species step
        diff = [k for k in range(n) if a[k] != b[k]]
        assert 1 <= len(diff) <= 2


@pytest.mark.parametrize("n,p,q", GRID)
def test_cbp_moves_change_word_or_shape_not_both(n, p, q, systems):
    sys_ = systems("cbp", n, p, q)
    for (i, j) in sys_.scaled_rates:
        (w1, l1), (w2, l2) = sys_.states[i], sys_.states[j]
        assert (w1 == w2) != (l1 == l2)
        if w1 == w2:
            assert abs(l1.weight - l2.weight) == 1


@pytest.mark.parametrize("n,p,q", GRID)
def test_stochastic_at_sample_points(n, p, q, systems):
    for kind in ("dasep", "cbp", "rrg"):
        sys_ = systems(kind, n, p, q)
        for (u0, t0) in [(1, 1), (0, 0), (Fraction(1, 2), Fraction(1, 3))]:
            report = check_stochastic(sys_, u0, t0)
            assert report.states_checked == sys_.size
            assert report.min_diagonal >= 0


@pytest.mark.parametrize("n,p,q", GRID)
def test_irreducible_on_grid(n, p, q, systems):
    for kind in ("dasep", "cbp", "rrg"):
        assert check_irreducible(systems(kind, n, p, q))


def test_stochastic_rejects_params_outside_unit_box():
    sys_ = build_dasep(3, 2, 1)
    with pytest.raises(ValueError):
        check_stochastic(sys_, 2, 0)
    with pytest.raises(ValueError):
        check_stochastic(sys_, 0, Fraction(-1, 2))


def test_not_stochastic_on_corrupted_rates():
    base = build_dasep(3, 2, 1)
    rates = dict(base.scaled_rates)
    rates[(0, 1)] = BivarPoly.constant(1000)
    bad = TransitionSystem("dasep", 3, 2, 1, base.states, rates)
    with pytest.raises(NotStochastic):
        check_stochastic(bad, 1, 1)


def test_not_stochastic_on_negative_rate():
    base = build_dasep(3, 2, 1)
    rates = dict(base.scaled_rates)
    rates[(0, 1)] = parse_poly("-1")
    bad = TransitionSystem("dasep", 3, 2, 1, base.states, rates)
    with pytest.raises(NotStochastic):
        check_stochastic(bad, 1, 1)


# ---------------------------------------------------------------------------
# rotation symmetry plumbing


def test_rotate_state_matches_word_rotation():
    sys_ = build_dasep(3, 2, 2)
    mu = parse_word("012")
    assert rotate_state(sys_, mu, 1) == parse_word("120")


def test_cyclic_orbits_partition_the_states():
    for kind in ("dasep", "cbp"):
        sys_ = build_cbp(4, 2, 2) if kind == "cbp" else build_dasep(4, 2, 2)
        orbits = cyclic_orbits(sys_)
        seen = sorted(i for orb in orbits for i in orb)
        assert seen == list(range(sys_.size))
        for orb in orbits:
            assert sys_.n % len(orb) == 0  # orbit sizes divide the ring length


def test_cyclic_orbits_none_for_rrg():
    assert cyclic_orbits(build_rrg(4, 2, 2)) is None


def test_rates_commute_with_rotation():
    sys_ = build_dasep(4, 2, 2)
    for (i, j), r in sys_.scaled_rates.items():
        a = rotate_state(sys_, sys_.states[i], 1)
        b = rotate_state(sys_, sys_.states[j], 1)
        assert sys_.scaled_rates[(sys_.index[a], sys_.index[b])] == r


# ---------------------------------------------------------------------------
# exports


def test_export_dot_golden_fragment():
    dot = export_dot(build_rrg(3, 2, 2))
    assert dot.startswith("digraph rrg_3_2_2 {")
    assert '"(1,1)" -> "(2,1)" [label="2*u/9"];' in dot
    assert '"(2,1)" -> "(1,1)" [label="1/9"];' in dot
    assert dot.endswith("}\n")


def test_export_dot_flags_two_site_double_count():
    dot = export_dot(build_dasep(2, 2, 1))
    assert "//" in dot and "1+t" in dot.replace(" ", "")


def test_matrix_json_round_trip():
    sys_ = build_dasep(3, 2, 2)
    doc = matrix_json(sys_)
    assert doc["kind"] == "dasep"
    assert doc["scale"] == 9
    assert len(doc["states"]) == 12
    # entries parse back to the stored rates
    for frm, to, text, scale in doc["entries"]:
        assert scale == 9
        i, j = doc["states"].index(frm), doc["states"].index(to)
        assert parse_poly(text) == sys_.scaled_rates[(i, j)]
    # valid JSON end to end
    json.loads(json.dumps(doc))


def test_matrix_json_two_site_note():
    doc = matrix_json(build_dasep(2, 2, 1))
    assert doc.get("note")
