"""Functions on [q]^N: Fourier coefficients, influences and noise stability.

Inner products are expectations under the uniform measure,
<f, g> = E_x[f(x) g(x)]. Tables are numpy arrays of shape (q,)*N + (r,):
r = 1 for real-valued functions, r = q for simplex-valued ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .operators import MarkovOperator, beckner

MAX_TABLE = 10**6
AGREE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TabulatedFunction:
    q: int
    N: int
    values: np.ndarray
    simplex: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if self.q ** self.N > MAX_TABLE:
            raise ValueError(f"table of size {self.q}^{self.N} exceeds {MAX_TABLE}")
        if vals.shape == (self.q,) * self.N:
            vals = vals[..., None]
        if vals.shape[:-1] != (self.q,) * self.N or vals.ndim != self.N + 1:
            raise ValueError(f"values have shape {vals.shape}, expected {(self.q,) * self.N} (+ (r,))")
        if self.simplex:
            if (vals < -1e-12).any() or np.abs(vals.sum(axis=-1) - 1).max(initial=0) > 1e-12:
                raise ValueError("simplex-valued table must be non-negative and sum to 1 at each point")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def r(self) -> int:
        return self.values.shape[-1]

    @classmethod
    def from_callable(cls, q: int, N: int, fn, r: int = 1, simplex: bool = False):
        vals = np.empty((q,) * N + (r,))
        for x in np.ndindex(*(q,) * N):
            vals[x] = fn(x)
        return cls(q, N, vals, simplex)

    @classmethod
    def from_coloring_table(cls, q: int, table: np.ndarray, colors: int) -> "TabulatedFunction":
        """Simplex embedding x -> e_{table[x]} of a {1..colors}-valued table."""
        table = np.asarray(table)
        vals = np.zeros(table.shape + (colors,))
        np.put_along_axis(vals, (table - 1)[..., None], 1.0, axis=-1)
        return cls(q, table.ndim, vals, simplex=True)

    def component(self, j: int) -> "TabulatedFunction":
        return TabulatedFunction(self.q, self.N, self.values[..., j])

    def norm_sq(self) -> float:
        return float(np.mean(np.sum(self.values ** 2, axis=-1)))


@dataclass(frozen=True, eq=False)
class FourierBasis:
    """Orthonormal (Euclidean) vectors alpha_0..alpha_{q-1} with alpha_0 constant.

    ``vectors[a]`` is alpha_a. Coefficients use the rescaled characters
    sqrt(q) * alpha_a, which are orthonormal for the expectation inner product.
    """

    q: int
    vectors: np.ndarray

    @cached_property
    def characters(self) -> np.ndarray:
        return np.sqrt(self.q) * self.vectors


def fourier_basis(q: int) -> FourierBasis:
    """Gram-Schmidt on the constant vector then e_a - uniform for a = 0, 1, ..."""
    vecs = [np.full(q, 1 / np.sqrt(q))]
    for a in range(q):
        v = -np.full(q, 1 / q)
        v[a] += 1
        for b in vecs:
            v = v - (b @ v) * b
        nv = np.linalg.norm(v)
        if nv > 1e-9:
            vecs.append(v / nv)
        if len(vecs) == q:
            break
    return FourierBasis(q, np.array(vecs))


def tensor_power_apply(values: np.ndarray, M: np.ndarray, N: int) -> np.ndarray:
    """Contract every one of the first N axes with ``M``: out[x] = sum_y prod M[x_i, y_i] v[y]."""
    out = values
    for axis in range(N):
        out = np.moveaxis(np.tensordot(M, out, axes=([1], [axis])), 0, axis)
    return out


def tensor_apply(op: MarkovOperator | np.ndarray, f: TabulatedFunction) -> TabulatedFunction:
    """(T^{(x)N} f)(x) = sum_y prod_i T(x_i -> y_i) f(y)."""
    M = op.matrix if isinstance(op, MarkovOperator) else np.asarray(op)
    if M.shape != (f.q, f.q):
        raise ValueError("operator dimension does not match the function's alphabet")
    return TabulatedFunction(f.q, f.N, tensor_power_apply(f.values, M, f.N))


def fourier(f: TabulatedFunction, basis: FourierBasis | None = None) -> np.ndarray:
    """Coefficients hat f(alpha_x) = E[f * alpha_x], indexed by x in [q]^N (plus the r axis)."""
    basis = basis or fourier_basis(f.q)
    return tensor_power_apply(f.values, basis.characters / f.q, f.N)


def levels(q: int, N: int) -> np.ndarray:
    """|x| (number of non-zero coordinates) for every x in [q]^N."""
    nz = (np.arange(q) != 0).astype(int)
    out = np.zeros((q,) * N, dtype=int)
    for axis in range(N):
        shape = [1] * N
        shape[axis] = q
        out = out + nz.reshape(shape)
    return out


@dataclass(frozen=True)
class InfluenceReport:
    """Per-coordinate influences summed over the r components.

    ``per_component`` has shape (N, r) and holds the Fourier-route total
    influence of each coordinate on each component.
    """

    total: np.ndarray  # Inf_i via Fourier weights
    total_variance: np.ndarray  # Inf_i via expected conditional variance
    low: np.ndarray  # Inf_i^{<=t}
    per_component: np.ndarray
    low_per_component: np.ndarray
    t: int

    @property
    def discrepancy(self) -> float:
        return float(np.abs(self.total - self.total_variance).max(initial=0))


def influences(f: TabulatedFunction, t: int | None = None, basis: FourierBasis | None = None) -> InfluenceReport:
    """Influences by both routes; raises if they disagree by more than 1e-10."""
    t = f.N if t is None else t
    coef2 = fourier(f, basis) ** 2
    lev = levels(f.q, f.N)
    idx = np.indices((f.q,) * f.N)
    per, low = np.zeros((f.N, f.r)), np.zeros((f.N, f.r))
    for i in range(f.N):
        mask = idx[i] != 0
        per[i] = coef2[mask].sum(axis=0)
        low[i] = coef2[mask & (lev <= t)].sum(axis=0)
    var_route = np.zeros(f.N)
    for i in range(f.N):
        var_route[i] = np.mean(np.var(f.values, axis=i).sum(axis=-1))
    rep = InfluenceReport(per.sum(axis=1), var_route, low.sum(axis=1), per, low, t)
    if rep.discrepancy > AGREE_TOL:
        raise ArithmeticError(f"influence routes disagree by {rep.discrepancy:.3e}")
    return rep


def inner(f: TabulatedFunction, g: TabulatedFunction) -> float:
    return float(np.mean(np.sum(f.values * g.values, axis=-1)))


def stability_fourier(f: TabulatedFunction, rho: float, basis: FourierBasis | None = None) -> float:
    coef2 = (fourier(f, basis) ** 2).sum(axis=-1)
    return float(np.sum(np.power(float(rho), levels(f.q, f.N)) * coef2))


def noise_stability(f: TabulatedFunction, rho: float) -> float:
    """<f, T_rho^{(x)N} f>; the Fourier-weighted sum is computed alongside as a check."""
    direct = inner(f, tensor_apply(beckner(f.q, rho), f))
    spectral = stability_fourier(f, rho)
    if abs(direct - spectral) > AGREE_TOL:
        raise ArithmeticError(f"stability routes disagree: {direct} vs {spectral}")
    return direct


def bar_map(x, q: int) -> tuple[int, ...]:
    """[q]^{2N} -> [q^2]^N, pairing (x_{2i-1}, x_{2i}) to x_{2i-1} + q x_{2i}."""
    x = tuple(x)
    if len(x) % 2:
        raise ValueError("bar_map needs an even-length string")
    return tuple(x[2 * i] + q * x[2 * i + 1] for i in range(len(x) // 2))


def underline_map(y, q: int) -> tuple[int, ...]:
    out = []
    for yi in y:
        out.extend((yi % q, yi // q))
    return tuple(out)


def bar_table(values: np.ndarray, q: int, component_axis: bool = False) -> np.ndarray:
    """Re-index a table on [q]^{2N} onto [q^2]^N, keeping a trailing component axis if flagged."""
    n2 = values.ndim - int(component_axis)
    if n2 % 2:
        raise ValueError("bar_table needs an even number of [q] axes")
    N = n2 // 2
    # axes (a1, b1, a2, b2, ...) -> (b1, a1, b2, a2, ...) so a C-order reshape yields a + q*b
    perm = [p for i in range(N) for p in (2 * i + 1, 2 * i)] + list(range(n2, values.ndim))
    return values.transpose(perm).reshape((q * q,) * N + values.shape[n2:])


def bar_function(f: TabulatedFunction) -> TabulatedFunction:
    """bar f(y) = f(underline y) on [q^2]^N."""
    if f.N % 2:
        raise ValueError("bar_function needs a function on [q]^{2N}")
    return TabulatedFunction(f.q * f.q, f.N // 2, bar_table(f.values, f.q, True), f.simplex)


@dataclass(frozen=True)
class ClaimCheck:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + AGREE_TOL


def check_claim_infrel(f: TabulatedFunction, i: int, t: int) -> ClaimCheck:
    """Inf_i^{<=t}(bar f) against Inf_{2i-1}^{<=2t}(f) + Inf_{2i}^{<=2t}(f); i is 1-based."""
    if not 1 <= i <= f.N // 2:
        raise ValueError("coordinate index out of range")
    lhs = influences(bar_function(f), t).low[i - 1]
    rep = influences(f, 2 * t)
    return ClaimCheck(float(lhs), float(rep.low[2 * i - 2] + rep.low[2 * i - 1]))


@dataclass(frozen=True)
class StabilityReport:
    stability_sum: float  # sum_j <f_j, T^{(x)N} f_j>
    max_low_influence: float  # max_i sum_j Inf_i^{<=t}(f_j)
    reference: float  # 1/q - 2c ln q / q^2 (minus C lnln q / q^2 when C is given)
    q: int
    c: float
    t: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def stability_sum_report(f: TabulatedFunction, op: MarkovOperator, t: int = 4,
                         c: float = 4.0, C: float | None = None) -> StabilityReport:
    """Numbers behind the low-influence stability lower bound; nothing is asserted.

    ``q`` is the number of components of the simplex-valued ``f``; ``c`` is the
    spectral-radius constant (rho(T) <= c/(q-1)) and ``C`` the unspecified
    universal constant, omitted from the reference when None.
    """
    if not f.simplex:
        raise ValueError("stability report expects a simplex-valued function")
    q = f.r
    Tf = tensor_apply(op, f)
    ssum = inner(f, Tf)
    inf = influences(f, t)
    ref = 1 / q - 2 * c * math.log(q) / q ** 2
    if C is not None:
        ref -= C * math.log(math.log(q)) / q ** 2
    return StabilityReport(ssum, float(inf.low.max(initial=0.0)), ref, q, c, t)
