"""Symmetric Markov operators on finite state spaces and their spectra."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

STOCHASTIC_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MarkovOperator:
    """Row-stochastic Q x Q matrix; ``matrix[x, y]`` is the probability of x -> y."""

    matrix: np.ndarray
    symmetric: bool = True

    def __post_init__(self):
        T = np.array(self.matrix, dtype=float)
        if T.ndim != 2 or T.shape[0] != T.shape[1]:
            raise ValueError("a Markov operator needs a square matrix")
        if (T < 0).any():
            raise ValueError("transition probabilities must be non-negative")
        if np.abs(T.sum(axis=1) - 1).max(initial=0) > STOCHASTIC_TOL:
            raise ValueError("rows must sum to 1")
        if self.symmetric and np.abs(T - T.T).max(initial=0) > STOCHASTIC_TOL:
            raise ValueError("matrix flagged symmetric is not")
        T.setflags(write=False)
        object.__setattr__(self, "matrix", T)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, other: "MarkovOperator") -> "MarkovOperator":
        return MarkovOperator(self.matrix @ other.matrix, self.symmetric and other.symmetric)

    def to_json(self) -> dict:
        return {"dim": self.dim, "symmetric": self.symmetric, "matrix": self.matrix.tolist()}


def beckner(q: int, rho: float) -> MarkovOperator:
    """Noise operator on [q]: stay with prob 1/q + (1 - 1/q) rho, else move uniformly."""
    if q < 2:
        raise ValueError("q must be at least 2")
    if not -1 <= rho <= 1:
        raise ValueError("rho must lie in [-1, 1]")
    off = (1 - rho) / q
    diag = 1 / q + (1 - 1 / q) * rho
    if diag < -STOCHASTIC_TOL or off < -STOCHASTIC_TOL:
        raise ValueError(f"rho={rho} gives negative entries for q={q} (need rho >= -1/(q-1))")
    T = np.full((q, q), off)
    np.fill_diagonal(T, diag)
    return MarkovOperator(np.clip(T, 0, None))


def pair_index(a: int, b: int, q: int) -> int:
    """Index of the pair (a, b) in [q^2]."""
    return a + q * b


def dmr_weights(q: int) -> tuple[Fraction, Fraction]:
    """Exact (alpha, beta) = (1/((q-1)(q-3)), 1/((q-1)(q-2)))."""
    if q < 4:
        raise ValueError("the pair operator is defined for q >= 4")
    return Fraction(1, (q - 1) * (q - 3)), Fraction(1, (q - 1) * (q - 2))


def dmr_entry(q: int, x: tuple[int, int], y: tuple[int, int]) -> Fraction:
    alpha, beta = dmr_weights(q)
    x1, x2 = x
    y1, y2 = y
    if x1 != x2 and y1 != y2 and not {x1, x2} & {y1, y2}:
        return alpha
    if x1 == x2 and y1 != y2 and x1 not in (y1, y2):
        return beta
    if x1 != x2 and y1 == y2 and y1 not in (x1, x2):
        return beta
    return Fraction(0)


def dmr_integer_matrix(q: int) -> tuple[np.ndarray, int]:
    """Integer matrix N and denominator D with T = N / D, D = (q-1)(q-2)(q-3)."""
    D = (q - 1) * (q - 2) * (q - 3)
    N = np.zeros((q * q, q * q), dtype=np.int64)
    for x1 in range(q):
        for x2 in range(q):
            for y1 in range(q):
                for y2 in range(q):
                    e = dmr_entry(q, (x1, x2), (y1, y2)) * D
                    assert e.denominator == 1
                    N[pair_index(x1, x2, q), pair_index(y1, y2, q)] = e.numerator
    return N, D


def dmr_operator(q: int) -> MarkovOperator:
    """Zero-diagonal symmetric operator on pairs [q]^2 that never keeps either coordinate.

    Moves between two off-diagonal pairs need disjoint supports (weight alpha);
    moves between a diagonal pair (a, a) and an off-diagonal pair need the
    first coordinate of the diagonal side's partner to avoid a (weight beta).
    """
    N, D = dmr_integer_matrix(q)
    return MarkovOperator(N / D)


def tsquare_closed_form(q: int, x: tuple[int, int], y: tuple[int, int]) -> Fraction:
    """Exact two-step transition probability of :func:`dmr_operator`.

    With l the number of symbols outside {x1, x2, y1, y2}: l(l-1)beta^2 when
    both pairs are diagonal, l(l-1)alpha*beta when exactly one is, and
    l(l-1)alpha^2 + l*beta^2 when neither is.
    """
    alpha, beta = dmr_weights(q)
    l = q - len({*x, *y})
    xd, yd = x[0] == x[1], y[0] == y[1]
    if xd and yd:
        return l * (l - 1) * beta ** 2
    if xd != yd:
        return l * (l - 1) * alpha * beta
    return l * (l - 1) * alpha ** 2 + l * beta ** 2


def tsquare_lower_bound(q: int) -> Fraction:
    return Fraction((q - 5) * (q - 4), (q - 3) ** 2 * (q - 2) * (q - 1))


@numba.njit(cache=True)
def _cyclic_sweeps(A, V, tol, max_sweeps):
    n = A.shape[0]
    # entries below skip can be left alone: even all of them together
    # contribute at most tol / 4 to the off-diagonal norm
    skip = tol / (4.0 * n)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += A[i, j] * A[i, j]
        if np.sqrt(off) < tol:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) < skip:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.hypot(theta, 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                app = A[p, p]
                aqq = A[q, q]
                for r in range(n):
                    apr = A[p, r]
                    aqr = A[q, r]
                    A[p, r] = c * apr - s * aqr
                    A[q, r] = s * apr + c * aqr
                    A[r, p] = A[p, r]
                    A[r, q] = A[q, r]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for r in range(n):
                    vrp = V[r, p]
                    vrq = V[r, q]
                    V[r, p] = c * vrp - s * vrq
                    V[r, q] = s * vrp + c * vrq
    return -1


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Row-cyclic ordering; stops once the Frobenius norm of the off-diagonal
    part is below ``tol``. Returns eigenvalues in descending order and the
    matching orthonormal eigenvectors as columns.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if A.ndim != 2 or A.shape != (n, n) or np.abs(A - A.T).max(initial=0) > 1e-12:
        raise ValueError("jacobi_eigh needs a symmetric matrix")
    A = np.ascontiguousarray((A + A.T) / 2)
    V = np.eye(n)
    if _cyclic_sweeps(A, V, tol, max_sweeps) < 0:
        raise ArithmeticError("Jacobi iteration did not converge")
    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], V[:, order]


def eigenvalues(op: MarkovOperator) -> np.ndarray:
    if not op.symmetric:
        raise ValueError("eigen-analysis here assumes a symmetric operator")
    return jacobi_eigh(op.matrix)[0]


def spectral_radius(op: MarkovOperator) -> float:
    """Largest |lambda| after removing one copy of the top eigenvalue 1."""
    w = eigenvalues(op)
    top = int(np.argmin(np.abs(w - 1)))
    rest = np.delete(w, top)
    return float(np.abs(rest).max()) if rest.size else 0.0


def power_iteration_second(op: MarkovOperator, iters: int = 5000, seed=0) -> float:
    """Second eigenvalue of T^2 by power iteration on the complement of the constant vector.

    Independent of the Jacobi solver; its square root is the spectral radius.
    """
    T2 = op.matrix @ op.matrix
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.dim)
    lam = 0.0
    for _ in range(iters):
        v -= v.mean()
        v /= np.linalg.norm(v)
        w = T2 @ v
        w -= w.mean()
        lam = float(v @ w)
        v = w
    return lam
