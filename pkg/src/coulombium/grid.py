"""Uniform symmetric grids, trapezoid quadrature and difference forms.

Every functional in this package is evaluated on a mesh of N equally
spaced nodes covering [-L, L], with N odd so that x = 0 is a node (the
background charge and the kink of |x| sit there).  ``integrate`` is the
trapezoid rule and ``kinetic_energy`` the forward-difference Dirichlet
form; the pair is used consistently everywhere so that the discrete
kernel identities (prefix-sum evaluation, Poisson inversion, half-axis
decoupling) hold to rounding error rather than to discretization error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GridMismatchError


@dataclass
class Grid:
    """Symmetric uniform mesh on [-L, L] with an odd number of nodes.

    Attributes
    ----------
    L : float
        Half-width of the domain, > 0.
    N : int
        Number of nodes, odd and >= 3.
    h : float
        Node spacing 2L/(N-1).
    x : numpy.ndarray
        Node positions.  Built from the centre outwards, so x = 0 exactly
        at the middle node and x[i] == -x[N-1-i] exactly.
    weights : numpy.ndarray
        Trapezoid quadrature weights: h at interior nodes, h/2 at the ends.
    """

    L: float
    N: int
    h: float = field(init=False)
    x: np.ndarray = field(init=False, repr=False)
    weights: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError(f"half-width must be positive, got {self.L}")
        if int(self.N) != self.N:
            raise ValueError(f"node count must be an integer, got {self.N}")
        self.N = int(self.N)
        if self.N < 3:
            raise ValueError(f"need at least 3 nodes, got {self.N}")
        if self.N % 2 == 0:
            raise ValueError(f"node count must be odd so x=0 is a node, got {self.N}")
        self.L = float(self.L)
        self.h = 2.0 * self.L / (self.N - 1)
        self.x = self.h * (np.arange(self.N) - (self.N - 1) // 2)
        w = np.full(self.N, self.h)
        w[0] = w[-1] = 0.5 * self.h
        self.weights = w

    @property
    def center_index(self) -> int:
        return (self.N - 1) // 2

    def same_mesh(self, other: "Grid") -> bool:
        return self.N == other.N and self.L == other.L


@dataclass
class Samples:
    """Real-valued samples of a function on a :class:`Grid`."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.N,):
            raise ValueError(
                f"expected {self.grid.N} samples, got shape {self.values.shape}"
            )

    def with_values(self, values) -> "Samples":
        return Samples(self.grid, values)


def make_grid(L: float, N: int) -> Grid:
    """Build the uniform symmetric grid on [-L, L] with N nodes (N odd)."""
    return Grid(L, N)


def from_function(grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> Samples:
    """Sample a vectorized callable on the grid nodes."""
    return Samples(grid, np.asarray(fn(grid.x), dtype=float))


def require_same_mesh(*samples: Samples) -> None:
    g0 = samples[0].grid
    for s in samples[1:]:
        if not g0.same_mesh(s.grid):
            raise GridMismatchError(
                f"mesh mismatch: (L={g0.L}, N={g0.N}) vs (L={s.grid.L}, N={s.grid.N})"
            )


def integrate(f: Samples) -> float:
    """Trapezoid rule for the integral of f over [-L, L]."""
    return float(np.dot(f.grid.weights, f.values))


def kinetic_energy(u: Samples) -> float:
    """Forward-difference Dirichlet form sum (u[i+1]-u[i])^2 / h.

    Approximates the integral of u'(x)^2 with u truncated to zero outside
    [-L, L]; it is exactly the quadratic form of the tridiagonal Dirichlet
    Laplacian used by the eigen-solver.
    """
    d = np.diff(u.values)
    return float(np.dot(d, d) / u.grid.h)


def reflect(f: Samples) -> Samples:
    """Samples of x -> f(-x); exact on the symmetric grid."""
    return Samples(f.grid, f.values[::-1].copy())


def normalize(u: Samples) -> Samples:
    """Scale u so that the trapezoid integral of u^2 is exactly 1."""
    sq = u.values * u.values
    mass = float(np.dot(u.grid.weights, sq))
    if mass <= 0.0:
        raise ValueError("cannot normalize a function with zero L2 mass")
    return Samples(u.grid, u.values / np.sqrt(mass))
