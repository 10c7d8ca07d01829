import pytest

from threadkd.workload import (GenerationError, clustered_points,
                               make_points, mixed_bench_windows,
                               random_windows, span_windows, uniform_points)


def test_uniform_basic():
    pts = uniform_points(500, 3, 64, seed=1)
    assert len(pts) == 500
    assert len(set(pts)) == 500
    assert all(len(p) == 3 and all(0 <= c < 64 for c in p) for p in pts)


def test_uniform_deterministic():
    assert uniform_points(200, 2, 4096, 7) == uniform_points(200, 2, 4096, 7)
    assert uniform_points(200, 2, 4096, 7) != uniform_points(200, 2, 4096, 8)


def test_uniform_full_universe():
    pts = uniform_points(64, 2, 8, seed=3)
    assert sorted(pts) == [(x, y) for x in range(8) for y in range(8)]


def test_uniform_overfull_raises():
    with pytest.raises(GenerationError):
        uniform_points(65, 2, 8, seed=3)


def test_clustered_basic():
    pts = clustered_points(800, 2, 4096, seed=5)
    assert len(pts) == len(set(pts)) == 800
    assert all(0 <= c < 4096 for p in pts for c in p)
    # blobs should leave most columns empty, unlike uniform
    xs = {p[0] for p in pts}
    assert len(xs) < 2000


def test_clustered_terminates_when_crowded():
    pts = clustered_points(240, 1, 256, seed=9)
    assert len(set(pts)) == 240


def test_clustered_deterministic():
    assert clustered_points(300, 2, 1024, 11) == clustered_points(300, 2, 1024, 11)


def test_make_points_dispatch():
    assert make_points(50, 2, 64, "uniform", 1) == uniform_points(50, 2, 64, 1)
    with pytest.raises(GenerationError):
        make_points(10, 2, 64, "zipf", 1)


def test_random_windows_shape():
    ws = random_windows(40, 3, 128, seed=2)
    assert len(ws) == 40
    for w in ws:
        assert len(w) == 3
        assert all(0 <= lo <= hi < 128 for lo, hi in w)


def test_span_windows_extent():
    ws = span_windows(25, 2, 256, [16, 64], seed=4)
    for w in ws:
        assert w[0][1] - w[0][0] == 15
        assert w[1][1] - w[1][0] == 63
        assert all(0 <= lo <= hi < 256 for lo, hi in w)


def test_mixed_bench_windows():
    ws = mixed_bench_windows(60, 2, 4096, seed=6)
    assert len(ws) == 60
    spans = {w[0][1] - w[0][0] + 1 for w in ws}
    assert spans == {4096 // 64, 4096 // 16, 4096 // 4}
