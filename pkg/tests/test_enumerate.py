import io

import pytest

from chromatlas.canon import canonical_graph6
from chromatlas.enumerate import (
    Graph6StreamError,
    brute_force_connected,
    enumerate_connected,
    filter_by_edges,
    read_graph6_stream,
    write_graph6_stream,
)
from chromatlas.graph import complete_graph, cycle_graph, is_connected, path_graph, star_graph

from conftest import paw


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 2), (4, 6), (5, 21), (6, 112), (7, 853)])
def test_counts(n, count):
    assert len(list(enumerate_connected(n))) == count


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_matches_labeled_brute_force(n):
    ours = [g.to_graph6() for g in enumerate_connected(n)]
    assert len(ours) == len(set(ours))
    assert set(ours) == {canonical_graph6(g) for g in brute_force_connected(n)}


@pytest.mark.parametrize("n", [6, 7])
def test_dual_augmentation_orders_agree(n):
    a = {g.to_graph6() for g in enumerate_connected(n, "max")}
    b = {canonical_graph6(g) for g in enumerate_connected(n, "min")}
    assert a == b


def test_outputs_are_canonical_connected_and_distinct():
    gs = list(enumerate_connected(6))
    assert all(is_connected(g) for g in gs)
    assert all(canonical_graph6(g) == g.to_graph6() for g in gs)
    assert len({g.to_graph6() for g in gs}) == len(gs)


def test_small_orders_content():
    keys = {g.to_graph6() for g in enumerate_connected(3)}
    assert keys == {canonical_graph6(path_graph(3)), canonical_graph6(complete_graph(3))}


def test_workers_preserve_order():
    assert [g.to_graph6() for g in enumerate_connected(6)] == [
        g.to_graph6() for g in enumerate_connected(6, workers=4)
    ]


@pytest.mark.parametrize("bad", [0, 11, -1])
def test_order_range(bad):
    with pytest.raises(ValueError):
        list(enumerate_connected(bad))


def test_filter_by_edges():
    four = list(enumerate_connected(4))
    assert {g.to_graph6() for g in filter_by_edges(four, 4)} == {canonical_graph6(cycle_graph(4)), canonical_graph6(paw())}
    assert {g.to_graph6() for g in filter_by_edges(four, 3)} == {canonical_graph6(path_graph(4)), canonical_graph6(star_graph(3))}
    assert [g.to_graph6() for g in filter_by_edges(four, 6)] == [complete_graph(4).to_graph6()]


class TestStreams:
    def test_read(self):
        assert list(read_graph6_stream(io.BytesIO(b"A_\nBw\n"))) == [complete_graph(2), complete_graph(3)]
        assert list(read_graph6_stream(io.StringIO("A_\r\nBw"))) == [complete_graph(2), complete_graph(3)]

    def test_empty(self):
        assert list(read_graph6_stream(io.BytesIO(b""))) == []

    def test_corrupt_line_number(self):
        with pytest.raises(Graph6StreamError) as err:
            list(read_graph6_stream(io.BytesIO(b"A_\nB~\nBw\n")))
        assert err.value.line == 2

    def test_round_trip_file(self, tmp_path):
        gs = list(enumerate_connected(5))
        path = tmp_path / "five.g6"
        with open(path, "w") as fh:
            assert write_graph6_stream(gs, fh) == 21
        assert list(read_graph6_stream(path)) == gs
