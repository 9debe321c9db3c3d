"""Lumping maps, the strong-lumping check, and fiber pushforwards."""

import pytest

from dasep import (
    CbpState,
    LumpingMap,
    Partition,
    build_cbp,
    build_dasep,
    build_rrg,
    cbp_to_rrg,
    count_arrangements,
    dasep_to_cbp,
    parse_poly,
    push_distribution,
    verify_balance,
    verify_lumping,
)
from dasep.errors import IndexMismatch


def test_word_to_pair_lumping_holds():
    report = verify_lumping(dasep_to_cbp(3, 2, 2))
    assert report.passed
    assert report.sources_checked == 12
    assert report.violations == ()


def test_pair_to_shape_lumping_holds():
    report = verify_lumping(cbp_to_rrg(4, 2, 2))
    assert report.passed


@pytest.mark.parametrize("n,p,q", [(2, 2, 1), (4, 3, 2), (5, 2, 2), (4, 3, 3)])
def test_both_lumpings_hold_at_scattered_points(n, p, q):
    assert verify_lumping(dasep_to_cbp(n, p, q)).passed
    assert verify_lumping(cbp_to_rrg(n, p, q)).passed


def test_fiber_sizes_are_aligned_arrangement_counts():
    lump = dasep_to_cbp(4, 2, 2)
    for y, fiber in enumerate(lump.fibers()):
        w, lam = lump.target.states[y]
        assert len(fiber) == count_arrangements(lam, 4, "aligned")


def test_identity_lumping_is_trivially_strong():
    sys_ = build_dasep(3, 2, 1)
    ident = LumpingMap(sys_, sys_, tuple(range(sys_.size)))
    assert verify_lumping(ident).passed


def test_constant_map_fails_with_witnesses():
    source = build_dasep(3, 2, 2)
    target = build_cbp(3, 2, 2)
    collapse = LumpingMap(source, target, (0,) * source.size)
    report = verify_lumping(collapse)
    assert not report.passed
    assert report.violations
    # unreached target states are part of the evidence
    assert any(v["found"] == "no source state maps here" for v in report.violations)


def test_scrambled_assignment_fails():
    lump = dasep_to_cbp(3, 2, 2)
    bad = list(lump.assignment)
    bad[0], bad[-1] = bad[-1], bad[0]
    report = verify_lumping(LumpingMap(lump.source, lump.target, tuple(bad)))
    assert not report.passed
    v = report.violations[0]
    assert parse_poly(v["expected"]) != parse_poly(v["found"])


def test_assignment_validation():
    sys3 = build_dasep(3, 2, 1)
    sys4 = build_dasep(4, 2, 1)
    with pytest.raises(IndexMismatch):
        LumpingMap(sys3, sys4, (0,))  # wrong length
    with pytest.raises(IndexMismatch):
        LumpingMap(sys3, sys4, (99,) * sys3.size)  # out of range


def test_scale_mismatch_rejected():
    lump = dasep_to_cbp(3, 2, 2)
    wrong_scale = build_cbp(4, 2, 2)
    # reuse the assignment against a target with a different ring size
    with pytest.raises(IndexMismatch):
        verify_lumping(LumpingMap(lump.source, wrong_scale, lump.assignment))


# ---------------------------------------------------------------------------
# pushforwards of stationary vectors


def test_pushforward_sums_table_entries(solved):
    pi = solved("dasep", 3, 2, 2)
    lump = dasep_to_cbp(3, 2, 2)
    pushed = push_distribution(lump, pi)
    # the fiber over (011,(2,1)) is {012, 021}; the entries sum to
    # u(u+4t+3) + u(u+2t+5) = 2u(u+3t+4)
    got = pushed[CbpState((0, 1, 1), Partition((2, 1)))]
    assert got == parse_poly("2*u^2 + 6*u*t + 8*u")


@pytest.mark.parametrize("n,p,q", [(3, 2, 2), (4, 2, 2), (4, 3, 2)])
def test_pushed_vector_is_stationary_for_the_image_chain(n, p, q, solved):
    pi = solved("dasep", n, p, q)
    lump = dasep_to_cbp(n, p, q)
    pushed = push_distribution(lump, pi)
    assert verify_balance(lump.target, pushed).passed
    # and once more down to the shape chain
    lump2 = cbp_to_rrg(n, p, q)
    pushed2 = push_distribution(lump2, pushed)
    assert verify_balance(lump2.target, pushed2).passed


def test_push_rejects_foreign_vector(solved):
    pi = solved("dasep", 3, 2, 2)
    with pytest.raises(IndexMismatch):
        push_distribution(dasep_to_cbp(4, 2, 2), pi)


def test_push_rejects_point_vectors():
    from dasep import solve_stationary_at_point

    lump = dasep_to_cbp(3, 2, 2)
    vec = solve_stationary_at_point(lump.source, 1, 1)
    with pytest.raises(ValueError):
        push_distribution(lump, vec)
