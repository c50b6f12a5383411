"""Uniform square grid and cell-centered scalar fields with two ghost layers.

Index convention: the interior cells carry 1-based indices (i, j) with
i, j = 1..M.  Stored arrays are padded by ``GHOST = 2`` layers on every side,
so paper cell (i, j) lives at array position (i + 1, j + 1); axis 0 is x,
axis 1 is y.  Ghost cells carry indices i <= 0 and i > M.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, EvaluationError

GHOST = 2


@dataclass(frozen=True)
class Grid:
    """Geometry of a uniform square-cell mesh over a square domain."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float
    M: int

    def __post_init__(self) -> None:
        if self.x_hi <= self.x_lo:
            raise ConfigurationError("x_hi must be greater than x_lo")
        if abs((self.y_hi - self.y_lo) - (self.x_hi - self.x_lo)) > 1e-12 * (
            self.x_hi - self.x_lo
        ):
            raise ConfigurationError("domain must be square (equal extents in x and y)")
        if self.M < 4:
            raise ConfigurationError("M must be at least 4")

    @property
    def h(self) -> float:
        return (self.x_hi - self.x_lo) / self.M

    @property
    def n_padded(self) -> int:
        return self.M + 2 * GHOST

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        """Center of cell (i, j) in 1-based interior indexing."""
        return (
            self.x_lo + (i - 0.5) * self.h,
            self.y_lo + (j - 0.5) * self.h,
        )

    def x_edge(self, i: int) -> float:
        """Coordinate x_{i+1/2} for i = 0..M."""
        return self.x_lo + i * self.h

    def y_edge(self, j: int) -> float:
        return self.y_lo + j * self.h

    def centers_1d(self) -> tuple[np.ndarray, np.ndarray]:
        """Cell-center coordinates along each axis, ghost cells included.

        Entry k of each array corresponds to paper index k - 1.
        """
        k = np.arange(self.n_padded)
        xs = self.x_lo + (k - GHOST + 0.5) * self.h
        ys = self.y_lo + (k - GHOST + 0.5) * self.h
        return xs, ys

    def center_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        xs, ys = self.centers_1d()
        return np.meshgrid(xs, ys, indexing="ij")

    def interior(self) -> tuple[slice, slice]:
        s = slice(GHOST, GHOST + self.M)
        return s, s

    def ghost_mask(self) -> np.ndarray:
        mask = np.ones((self.n_padded, self.n_padded), dtype=bool)
        mask[self.interior()] = False
        return mask


def make_grid(x_lo: float, x_hi: float, y_lo: float, y_hi: float, M: int) -> Grid:
    return Grid(float(x_lo), float(x_hi), float(y_lo), float(y_hi), int(M))


@dataclass
class CellField:
    """One scalar value per cell (ghosts included) at a time level."""

    grid: Grid
    data: np.ndarray
    time_label: float = 0.0

    def __post_init__(self) -> None:
        n = self.grid.n_padded
        if self.data.shape != (n, n):
            raise ConfigurationError(
                f"field data must have shape {(n, n)}, got {self.data.shape}"
            )

    @classmethod
    def zeros(cls, grid: Grid, t: float = 0.0) -> "CellField":
        return cls(grid, np.zeros((grid.n_padded, grid.n_padded)), t)

    def copy(self) -> "CellField":
        return CellField(self.grid, self.data.copy(), self.time_label)

    def interior(self) -> np.ndarray:
        return self.data[self.grid.interior()]

    def value(self, i: int, j: int) -> float:
        """Value of cell (i, j) in paper indexing (ghosts via i <= 0, i > M)."""
        return float(self.data[i + GHOST - 1, j + GHOST - 1])

    def write_csv(self, path) -> None:
        """Dump interior cells as CSV rows ``i,j,x,y,u`` (j outer, i inner)."""
        grid = self.grid
        with open(path, "w", newline="") as fh:
            fh.write("i,j,x,y,u\n")
            for j in range(1, grid.M + 1):
                for i in range(1, grid.M + 1):
                    x, y = grid.cell_center(i, j)
                    fh.write(f"{i},{j},{x!r},{y!r},{self.value(i, j)!r}\n")


def _check_finite(values: np.ndarray, grid: Grid, what: str) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        a, b = np.argwhere(bad)[0]
        raise EvaluationError(
            f"{what} produced a non-finite value at cell ({a - GHOST + 1}, {b - GHOST + 1})"
        )


def fill_from_function(grid: Grid, f, t: float = 0.0) -> CellField:
    """Evaluate f at every cell center (ghosts included)."""
    X, Y = grid.center_mesh()
    values = np.broadcast_to(np.asarray(f(X, Y), dtype=float), X.shape).copy()
    _check_finite(values, grid, "initial function")
    return CellField(grid, values, t)


def fill_ghosts_dirichlet(field: CellField, exact, t: float) -> CellField:
    """Set both ghost layers from exact(x, y, t); interior is untouched."""
    grid = field.grid
    mask = grid.ghost_mask()
    X, Y = grid.center_mesh()
    values = np.asarray(exact(X[mask], Y[mask], t), dtype=float)
    if not np.all(np.isfinite(values)):
        raise EvaluationError("boundary function produced a non-finite ghost value")
    field.data[mask] = values
    return field
