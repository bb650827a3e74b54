import math

import pytest

import grasshopper as gh


@pytest.fixture(scope="module")
def grid():
    return gh.generate_fibonacci_antipodal(600)


def test_grid(grid):
    assert len(grid) == 1200
    assert grid.spacing == pytest.approx(math.sqrt(4 * math.pi / 1200))
    x, y, z = grid.point(0)
    ax, ay, az = grid.point(grid.antipode(0))
    assert (x + ax, y + ay, z + az) == pytest.approx((0, 0, 0), abs=1e-12)


def test_small_grid_rejected():
    with pytest.raises(gh.InputError):
        gh.generate_fibonacci_antipodal(2)


def test_hemisphere_probability(grid):
    table = gh.build_interaction(grid, math.pi / 3)
    p = gh.success_probability(gh.hemisphere_lawn(grid), table)
    assert p == pytest.approx(2 / 3, abs=0.02)


def test_reflection(grid):
    cfg = gh.TwoLawnConfig(gh.random_lawn(grid, 1), gh.random_lawn(grid, 2))
    assert gh.reflection_difference(cfg, 0.3 * math.pi) < 1e-12


def test_unresolved_angle(grid):
    with pytest.raises(gh.AngleUnresolved):
        gh.build_interaction(grid, 1e-4)


def test_anneal_beats_random(grid):
    table = gh.build_interaction(grid, 0.3 * math.pi)
    start = gh.random_lawn(grid, 5)
    result = gh.anneal(start, table, seed=9, schedule=gh.AnnealSchedule(1e-3, 1e-6, 0.8, 5))
    assert result.best_probability > gh.success_probability(start, table)
    assert len(result.trace) > 0


def test_lawn_roundtrip(tmp_path, grid):
    table = gh.build_interaction(grid, math.pi / 4)
    lawn = gh.cogwheel_lawn(grid, 7)
    p = gh.success_probability(lawn, table)
    path = tmp_path / "lawn.json"
    gh.write_lawn_file(path, lawn, math.pi / 4, gh.DeltaKernel(), p, seed=3)
    state, theta, stored = gh.read_lawn_file(path, grid)
    assert state == lawn
    assert theta == math.pi / 4
    assert stored == p
    other = gh.generate_fibonacci_antipodal(601)
    with pytest.raises(gh.GridMismatch):
        gh.read_lawn_file(path, other)


def test_rle():
    assert gh.encode_rle([1, 1, 1, 0, 0]) == "1*3,0*2"
    assert gh.decode_rle("1*3,0*2", 5) == [1, 1, 1, 0, 0]


def test_sweep_csv():
    text = (
        "theta,p_one,p_two,q,hemisphere,gap_one,gap_two,n_cogs_one,n_cogs_two,seed\n"
        "0.5,0.8,nan,0.9,0.84,0.1,nan,7,0,1\n"
    )
    rows = gh.read_sweep_csv(text)
    assert rows[0]["p_one"] == 0.8
    assert rows[0]["p_two"] is None or math.isnan(rows[0]["p_two"])


def test_landmark():
    assert math.pi / gh.gap_maximizer_landmark() == pytest.approx(4.5523, abs=1e-3)
