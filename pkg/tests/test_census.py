import math

import pytest

from sawtm.census import (
    CensusConfig,
    Method,
    census,
    choose_k,
    default_q,
    inscribed,
    inscribed_incl_excl,
    nk_terms,
    rectangles,
    residue_terms,
)
from sawtm.core import LatticeMode, Rect
from sawtm.oracle import enumerate_polygons_oracle
from sawtm.sweep import full_sweep

SAP, SAW = LatticeMode.SAP, LatticeMode.SAW


def test_choose_k():
    assert choose_k(100) == 21
    assert round(math.sqrt(100 * math.log(100)), 2) == 21.46
    assert choose_k(4) == 2
    assert default_q(100, 21) == 4
    for n in range(4, 200):
        assert 2 <= choose_k(n) <= n - 1


def test_k2_is_three_terms():
    terms = nk_terms(Rect(4, 2), SAP, 14, 2)
    assert set(terms) == {frozenset({0}), frozenset({1}), frozenset({0, 1})}
    total = terms[frozenset({0})].copy().add_(terms[frozenset({1})]).add_(terms[frozenset({0, 1})], -1)
    assert total == full_sweep(Rect(4, 2), SAP, 14)


def test_k4_has_fifteen_terms():
    assert len(nk_terms(Rect(5, 1), SAP, 12, 4)) == 2 ** 4 - 1


def test_unit_square_identity():
    for k in (2, 3, 4):
        assert inscribed_incl_excl(Rect(1, 1), SAP, 8, k) == full_sweep(Rect(1, 1), SAP, 8)


def test_incl_excl_3x3():
    assert inscribed_incl_excl(Rect(3, 3), SAP, 12, 2) == full_sweep(Rect(3, 3), SAP, 12)


def test_residue_terms_sum_matches_subsets():
    # grouping must preserve the signed total of all 2^k - 1 subsets
    for w in range(1, 9):
        for k in (2, 3, 4, 5):
            terms = residue_terms(Rect(w, 1), k)
            assert all(c != 0 for c in terms.values())
            assert sum(terms.values()) == 1


def test_narrow_rect_reduces_to_full_count():
    # fewer cuts than classes: only the no-stop pattern survives
    assert residue_terms(Rect(2, 2), 4) == {(): 1}


@pytest.mark.parametrize("method", list(Method))
def test_census_sap_8(method):
    res = census(CensusConfig(8, SAP, method, k=2 if method is Method.SKIP else None))
    assert res.series.nonzero() == {4: 1, 6: 2, 8: 7}


@pytest.mark.parametrize("method", list(Method))
def test_census_saw_3(method):
    res = census(CensusConfig(3, SAW, method, k=2 if method is Method.SKIP else None))
    assert res.series.nonzero() == {0: 1, 1: 4, 2: 12, 3: 36}


def test_skip_k3_vs_full_14():
    a = census(CensusConfig(14, SAP, Method.SKIP, k=3)).series
    b = census(CensusConfig(14, SAP, Method.FULL_TM)).series
    assert a == b
    assert a[14] == enumerate_polygons_oracle(14)[14] == 588


def test_transpose_opt_neutral():
    for mode, n in ((SAP, 14), (SAW, 8)):
        for method in (Method.FULL_TM, Method.SKIP):
            kw = dict(k=3) if method is Method.SKIP else {}
            on = census(CensusConfig(n, mode, method, transpose_opt=True, **kw))
            off = census(CensusConfig(n, mode, method, transpose_opt=False, **kw))
            assert on.series == off.series
            assert on.rect_count < off.rect_count


def test_tightened_q_neutral():
    for mode, n in ((SAP, 16), (SAW, 9)):
        base = census(CensusConfig(n, mode, Method.SKIP, k=3))
        tight = census(CensusConfig(n, mode, Method.SKIP, k=3, tightened_q=True))
        assert base.series == tight.series


def test_larger_q_still_exact():
    base = census(CensusConfig(14, SAP, Method.SKIP, k=3)).series
    assert census(CensusConfig(14, SAP, Method.SKIP, k=3, q=7)).series == base


def test_config_validation():
    with pytest.raises(ValueError):
        CensusConfig(7, SAP, Method.SKIP, k=9)
    with pytest.raises(ValueError):
        CensusConfig(7, SAP, Method.SKIP, k=1)
    with pytest.raises(ValueError):
        CensusConfig(12, SAP, Method.SKIP, k=3, q=3)
    with pytest.raises(ValueError):
        CensusConfig(12, SAP, jobs=0)


def test_rectangles_respect_perimeter():
    for rect, mult in rectangles(SAP, 12, True):
        assert 2 * (rect.w + rect.h) <= 12 and rect.h <= rect.w
        assert mult == (1 if rect.w == rect.h else 2)


def test_inscribed_degenerate_saw():
    assert inscribed(Rect(3, 0), SAW, 5).nonzero() == {3: 1}
    assert inscribed(Rect(0, 6), SAW, 5).nonzero() == {}


def test_metadata():
    res = census(CensusConfig(12, SAP, Method.SKIP, k=3))
    assert (res.k, res.q) == (3, 4)
    assert res.task_count >= res.rect_count > 0
    assert res.peak_states > 0


def test_jobs_deterministic():
    one = census(CensusConfig(12, SAP, Method.SKIP, k=3, jobs=1))
    many = census(CensusConfig(12, SAP, Method.SKIP, k=3, jobs=4))
    assert one.series == many.series
