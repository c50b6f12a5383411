import numpy as np
import pytest

from compactfv import (
    CellField,
    ConfigurationError,
    EvaluationError,
    GHOST,
    fill_from_function,
    fill_ghosts_dirichlet,
    make_grid,
)


def test_basic_geometry():
    g = make_grid(-1.0, 1.0, -1.0, 1.0, 10)
    assert g.h == pytest.approx(0.2)
    assert g.n_padded == 14
    assert g.cell_center(1, 1) == pytest.approx((-0.9, -0.9))
    assert g.cell_center(10, 10) == pytest.approx((0.9, 0.9))
    assert g.x_edge(0) == pytest.approx(-1.0)
    assert g.x_edge(10) == pytest.approx(1.0)


def test_centers_include_ghosts():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    xs, ys = g.centers_1d()
    assert len(xs) == 8
    # entry GHOST corresponds to the first interior cell
    assert xs[GHOST] == pytest.approx(0.125)
    assert xs[0] == pytest.approx(-0.375)
    assert xs[-1] == pytest.approx(1.375)


def test_rejects_bad_domains():
    with pytest.raises(ConfigurationError):
        make_grid(1.0, 0.0, 0.0, 1.0, 8)
    with pytest.raises(ConfigurationError):
        make_grid(0.0, 1.0, 0.0, 2.0, 8)
    with pytest.raises(ConfigurationError):
        make_grid(0.0, 1.0, 0.0, 1.0, 3)


def test_field_shape_checked():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    with pytest.raises(ConfigurationError):
        CellField(g, np.zeros((4, 4)))


def test_interior_and_ghost_mask():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 5)
    mask = g.ghost_mask()
    assert mask.sum() == g.n_padded**2 - 25
    f = CellField.zeros(g)
    f.data[g.interior()] = 1.0
    assert f.interior().sum() == 25
    assert f.data[mask].sum() == 0.0


def test_value_uses_one_based_indexing():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    f = fill_from_function(g, lambda x, y: x + 10 * y)
    x, y = g.cell_center(2, 3)
    assert f.value(2, 3) == pytest.approx(x + 10 * y)
    # ghost cells reachable with indices outside 1..M
    xs, _ = g.centers_1d()
    assert f.value(0, 1) == pytest.approx(xs[1] + 10 * xs[GHOST])


def test_fill_rejects_non_finite():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    with pytest.raises(EvaluationError):
        fill_from_function(g, lambda x, y: np.where(x > 0.5, np.inf, 0.0))


def test_ghost_fill_keeps_interior():
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    f = fill_from_function(g, lambda x, y: 7.0 + 0 * x)
    fill_ghosts_dirichlet(f, lambda x, y, t: x + y + t, 2.0)
    assert np.all(f.interior() == 7.0)
    xs, ys = g.centers_1d()
    assert f.data[0, 3] == pytest.approx(xs[0] + ys[3] + 2.0)


def test_csv_layout(tmp_path):
    g = make_grid(0.0, 1.0, 0.0, 1.0, 4)
    f = fill_from_function(g, lambda x, y: x * y)
    path = tmp_path / "field.csv"
    f.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "i,j,x,y,u"
    assert len(lines) == 17
    # row order: j outer, i inner
    first = lines[1].split(",")
    assert (first[0], first[1]) == ("1", "1")
    second = lines[2].split(",")
    assert (second[0], second[1]) == ("2", "1")
    # values round-trip at full precision
    assert float(first[4]) == f.value(1, 1)
