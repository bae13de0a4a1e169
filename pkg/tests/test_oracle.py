import pytest

from sawtm.core import LatticeMode, Rect
from sawtm.oracle import (
    FeasibilityError,
    cut_crossings,
    enumerate_polygons_oracle,
    enumerate_walks_oracle,
    inscribed_oracle,
    iter_polygons,
    polygons_by_rooted_walks,
)

SAP, SAW = LatticeMode.SAP, LatticeMode.SAW


def test_walk_counts():
    c = enumerate_walks_oracle(6)
    assert c[0] == 1
    assert c[1] == 4
    assert c[3] == 36
    assert c[5] == 284


def test_polygon_counts():
    p = enumerate_polygons_oracle(10)
    assert p[4] == 1
    assert p[5] == 0
    assert p[6] == 2
    assert p[8] == 7


def test_two_polygon_routes_agree():
    assert enumerate_polygons_oracle(14) == polygons_by_rooted_walks(14)


def test_polygons_yielded_once():
    seen = set()
    for cyc in iter_polygons(12):
        xs = min(v[0] for v in cyc)
        ys = min(v[1] for v in cyc)
        edges = frozenset(frozenset(((a[0] - xs, a[1] - ys), (b[0] - xs, b[1] - ys)))
                          for a, b in zip(cyc, cyc[1:] + cyc[:1]))
        assert edges not in seen
        seen.add(edges)


@pytest.mark.parametrize("rect, mode, nmax, expected", [
    (Rect(1, 1), SAP, 8, {4: 1}),
    (Rect(2, 2), SAP, 8, {8: 5}),
    (Rect(3, 1), SAP, 8, {8: 1}),
    (Rect(1, 0), SAW, 3, {1: 1}),
])
def test_inscribed_examples(rect, mode, nmax, expected):
    assert inscribed_oracle(rect, mode, nmax).nonzero() == expected


def test_rect_decomposition_sap(sap_table):
    total = [0] * 17
    for series in sap_table.values():
        for n, c in series.nonzero().items():
            total[n] += c
    assert total == enumerate_polygons_oracle(16).counts


def test_rect_decomposition_saw(saw_table):
    total = [0] * 11
    for series in saw_table.values():
        for n, c in series.nonzero().items():
            total[n] += 2 * c
    assert total[1:] == enumerate_walks_oracle(10).counts[1:]


def test_transpose_symmetry(sap_table, saw_table):
    for table in (sap_table, saw_table):
        for rect, series in table.items():
            assert table[rect.transpose()] == series


def test_cut_crossings():
    # 2x1 box boundary: every cut crossed twice
    square = [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1)]
    assert cut_crossings(square, closed=True) == [2, 2]
    assert cut_crossings([(0, 0), (1, 0), (1, 1), (2, 1)], closed=False) == [1, 1]


def test_guards():
    with pytest.raises(FeasibilityError):
        enumerate_walks_oracle(21)
    with pytest.raises(FeasibilityError):
        enumerate_polygons_oracle(28)
