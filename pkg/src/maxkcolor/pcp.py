"""Exact simulation of the 2-to-1 Label Cover -> k-coloring verifier.

Labels are 0-based: U-labels in [R], V-labels in [2R], and coordinate
blocks of [k]^{2R} are the position pairs (2i, 2i + 1) for i in [R]. A point
of [k^2]^R is identified with [k]^{2R} through (a, b) <-> a + k*b.

The verifier picks u uniformly, two neighbours v, v' independently and
uniformly, x uniform in [k^2]^R and y ~ T^{(x)R} x for the pair operator T,
and accepts iff (chi_v o sigma_v)(x) != (chi_v' o sigma_v')(y).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import BudgetExceeded
from .spectral.fourier import TabulatedFunction, bar_function, bar_table, influences, tensor_power_apply
from .spectral.operators import dmr_integer_matrix


def _check_two_to_one(proj, R: int):
    proj = tuple(int(p) for p in proj)
    if len(proj) != 2 * R:
        raise ValueError(f"projection has length {len(proj)}, expected {2 * R}")
    counts = [0] * R
    for p in proj:
        if not 0 <= p < R:
            raise ValueError(f"projection value {p} outside [0, {R})")
        counts[p] += 1
    if any(c != 2 for c in counts):
        raise ValueError("projection is not exactly 2-to-1")
    return proj


@dataclass(frozen=True)
class LabelCoverInstance:
    n_u: int
    n_v: int
    R: int
    edges: tuple[tuple[int, int, tuple[int, ...]], ...]  # (u, v, projection [2R] -> [R])

    def __post_init__(self):
        norm = []
        for u, v, proj in self.edges:
            if not (0 <= u < self.n_u and 0 <= v < self.n_v):
                raise ValueError(f"edge ({u}, {v}) out of range")
            norm.append((int(u), int(v), _check_two_to_one(proj, self.R)))
        object.__setattr__(self, "edges", tuple(norm))
        degs = {len(self.neighbourhood(u)) for u in range(self.n_u)}
        if len(degs) > 1 or 0 in degs:
            raise ValueError("label cover instance must be left-regular with positive degree")

    def neighbourhood(self, u: int) -> list[int]:
        """Indices into ``edges`` of the edges at u, in edge order."""
        return [i for i, e in enumerate(self.edges) if e[0] == u]

    @property
    def degree(self) -> int:
        return len(self.neighbourhood(0)) if self.n_u else 0


@dataclass(frozen=True)
class Labeling:
    u_labels: tuple[int, ...]
    v_labels: tuple[int, ...]


def labeling_value(inst: LabelCoverInstance, lab: Labeling) -> Fraction:
    if len(lab.u_labels) != inst.n_u or len(lab.v_labels) != inst.n_v:
        raise ValueError("labeling does not cover the instance")
    good = sum(proj[lab.v_labels[v]] == lab.u_labels[u] for u, v, proj in inst.edges)
    return Fraction(good, len(inst.edges)) if inst.edges else Fraction(1)


def _random_projection(rng, R: int) -> list[int]:
    perm = rng.permutation(2 * R)
    proj = [0] * (2 * R)
    for i in range(R):
        proj[perm[2 * i]] = proj[perm[2 * i + 1]] = i
    return proj


def gen_label_cover(seed, n_u: int, n_v: int, degree: int, R: int,
                    satisfiable: bool = True) -> tuple[LabelCoverInstance, Labeling | None]:
    """Left-regular exactly 2-to-1 instance; planted labeling when ``satisfiable``.

    Every u gets ``degree`` distinct neighbours. With a planted labeling, each
    projection is a random 2-to-1 map whose block labels are swapped so the
    block holding l(v) maps to l(u).
    """
    if R < 1 or n_u < 1 or n_v < 1:
        raise ValueError("need R, |U|, |V| >= 1")
    if not 1 <= degree <= n_v:
        raise ValueError(f"degree {degree} infeasible with |V| = {n_v} distinct neighbours")
    rng = np.random.default_rng(seed)
    lab = None
    if satisfiable:
        lab = Labeling(tuple(int(a) for a in rng.integers(R, size=n_u)),
                       tuple(int(a) for a in rng.integers(2 * R, size=n_v)))
    edges = []
    for u in range(n_u):
        for v in sorted(int(a) for a in rng.choice(n_v, size=degree, replace=False)):
            proj = _random_projection(rng, R)
            if lab is not None:
                b, want = proj[lab.v_labels[v]], lab.u_labels[u]
                proj = [want if p == b else b if p == want else p for p in proj]
            edges.append((u, v, tuple(proj)))
    return LabelCoverInstance(n_u, n_v, R, tuple(edges)), lab


def block_permutation(proj) -> tuple[int, ...]:
    """Permutation sigma of [2R] whose inverse sends positions (2i, 2i + 1)
    to the sorted preimage of label i. ``sigma[j]`` is the image of j."""
    R = len(proj) // 2
    proj = _check_two_to_one(proj, R)
    inv = [0] * (2 * R)
    for i in range(R):
        a, b = sorted(j for j in range(2 * R) if proj[j] == i)
        inv[2 * i], inv[2 * i + 1] = a, b
    return invert(inv)


def sigma_permutations(proj, proj2) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Canonical (sigma_v, sigma_v') for the two projections of a verifier query.

    Both projections then agree blockwise: positions 2i and 2i + 1 pull back
    to labels that both projections send to i.
    """
    return block_permutation(proj), block_permutation(proj2)


def invert(sigma) -> tuple[int, ...]:
    inv = [0] * len(sigma)
    for j, s in enumerate(sigma):
        inv[s] = j
    return tuple(inv)


def long_code_encode(label: int, length: int, k: int) -> np.ndarray:
    """Dictator table x -> x_label + 1 over [k]^length (colors are 1-based)."""
    if not 0 <= label < length:
        raise ValueError("label out of range")
    shape = [1] * length
    shape[label] = k
    return np.broadcast_to(np.arange(1, k + 1).reshape(shape), (k,) * length).copy()


def compose(table: np.ndarray, sigma) -> np.ndarray:
    """(table o sigma)(x) = table(x o sigma) with (x o sigma)_j = x_{sigma(j)}."""
    return np.transpose(table, axes=invert(sigma))


@dataclass(frozen=True, eq=False)
class LongCodeProof:
    k: int
    tables: tuple[np.ndarray, ...]  # chi_v over [k]^{2R}, values in 1..k

    def __post_init__(self):
        tabs = []
        for t in self.tables:
            t = np.asarray(t, dtype=np.int64)
            if t.ndim and set(t.shape) != {self.k}:
                raise ValueError("proof tables must have shape (k,)*2R")
            if t.size and (t.min() < 1 or t.max() > self.k):
                raise ValueError("proof entries must lie in 1..k")
            tabs.append(t)
        object.__setattr__(self, "tables", tuple(tabs))

    @classmethod
    def from_labeling(cls, inst: LabelCoverInstance, lab: Labeling, k: int) -> "LongCodeProof":
        return cls(k, tuple(long_code_encode(l, 2 * inst.R, k) for l in lab.v_labels))

    @classmethod
    def constant(cls, inst: LabelCoverInstance, k: int, color: int = 1) -> "LongCodeProof":
        return cls(k, tuple(np.full((k,) * (2 * inst.R), color) for _ in range(inst.n_v)))

    @classmethod
    def random(cls, inst: LabelCoverInstance, k: int, seed=None) -> "LongCodeProof":
        rng = np.random.default_rng(seed)
        return cls(k, tuple(rng.integers(1, k + 1, size=(k,) * (2 * inst.R)) for _ in range(inst.n_v)))

    def with_entry(self, v: int, point, color: int) -> "LongCodeProof":
        tabs = list(self.tables)
        t = tabs[v].copy()
        t[tuple(point)] = color
        tabs[v] = t
        return LongCodeProof(self.k, tuple(tabs))


def _check_proof(inst: LabelCoverInstance, proof: LongCodeProof, k: int):
    if k < 4:
        raise ValueError("the pair noise operator needs k >= 4")
    if proof.k != k or len(proof.tables) != inst.n_v:
        raise ValueError("proof does not match the instance / k")
    for t in proof.tables:
        if t.shape != (k,) * (2 * inst.R):
            raise ValueError("proof table has the wrong shape")


def edge_views(inst: LabelCoverInstance, proof: LongCodeProof) -> list[np.ndarray]:
    """For every edge (u, v), the table of chi_v o sigma_v re-indexed onto [k^2]^R."""
    out = []
    for _, v, proj in inst.edges:
        sigma = block_permutation(proj)
        out.append(bar_table(compose(proof.tables[v], sigma), proof.k))
    return out


def enumeration_size(inst: LabelCoverInstance, k: int) -> int:
    support = max((k - 2) * (k - 3) + (k - 2), (k - 1) * (k - 2))
    return inst.n_u * inst.degree ** 2 * k ** (2 * inst.R) * support ** inst.R


def acceptance_probability(inst: LabelCoverInstance, proof: LongCodeProof, k: int,
                           budget: int = 10**9) -> Fraction:
    """Exact acceptance probability as a Fraction.

    T = N/D with integer N, so every rejection weight is an integer count
    divided by |U| deg^2 k^{2R} D^R; the contraction runs in int64.
    """
    _check_proof(inst, proof, k)
    size = enumeration_size(inst, k)
    if size > budget:
        raise BudgetExceeded(f"verifier enumeration size {size} exceeds budget {budget}")
    N, D = dmr_integer_matrix(k)
    R = inst.R
    views = edge_views(inst, proof)
    pushed = []
    for view in views:
        onehot = (view[..., None] == np.arange(1, k + 1)).astype(np.int64)
        pushed.append(tensor_power_apply(onehot, N, R))
    reject = Fraction(0)
    for u in range(inst.n_u):
        nbrs = inst.neighbourhood(u)
        count = 0
        for e in nbrs:
            idx = (views[e] - 1)[..., None]
            for e2 in nbrs:
                count += int(np.take_along_axis(pushed[e2], idx, axis=-1).sum())
        reject += Fraction(count, len(nbrs) ** 2)
    reject /= inst.n_u * k ** (2 * R) * D ** R
    return 1 - reject


def monte_carlo_acceptance(inst: LabelCoverInstance, proof: LongCodeProof, k: int,
                           samples: int = 10**6, seed=0) -> tuple[float, float]:
    """Sampled acceptance rate and its standard error."""
    _check_proof(inst, proof, k)
    rng = np.random.default_rng(seed)
    R = inst.R
    N, D = dmr_integer_matrix(k)
    cdf = np.cumsum(N / D, axis=1)
    views = np.stack([v.reshape(-1) for v in edge_views(inst, proof)])
    nbrs = np.array([inst.neighbourhood(u) for u in range(inst.n_u)])
    u = rng.integers(inst.n_u, size=samples)
    e1 = nbrs[u, rng.integers(nbrs.shape[1], size=samples)]
    e2 = nbrs[u, rng.integers(nbrs.shape[1], size=samples)]
    x = rng.integers(k * k, size=(samples, R))
    y = np.empty_like(x)
    for i in range(R):
        r = rng.random(samples)
        y[:, i] = np.minimum((cdf[x[:, i]] < r[:, None]).sum(axis=1), k * k - 1)
    place = (k * k) ** np.arange(R - 1, -1, -1)
    fx = views[e1, x @ place]
    fy = views[e2, y @ place]
    acc = (fx != fy).astype(float)
    return float(acc.mean()), float(acc.std(ddof=1) / np.sqrt(samples))


@dataclass(frozen=True)
class InfluenceDecode:
    sugg_u: tuple[tuple[int, ...], ...]
    sugg_v: tuple[tuple[int, ...], ...]
    u_influence: tuple[tuple[float, ...], ...]  # sum_j Inf_i^{<=t}(g^u_j), i in [R]
    v_influence: tuple[tuple[float, ...], ...]  # sum_j Inf_i^{<=2t}(f^v_j), i in [2R]
    labeling: Labeling
    value: Fraction
    t: int
    delta: float


def influence_decode(inst: LabelCoverInstance, proof: LongCodeProof, k: int,
                     t: int = 1, delta: float = 0.1, max_table: int = 10**6) -> InfluenceDecode:
    """Suggest labels from low-degree influences of the (averaged) proof tables.

    g^u averages the barred, block-permuted simplex tables of u's neighbours;
    Sugg_u keeps coordinates with Inf^{<=t}(g^u) >= delta and Sugg_v those with
    Inf^{<=2t}(f^v) >= delta/4. Each vertex takes its smallest suggestion
    (label 0 when none).
    """
    if k ** (2 * inst.R) * k > max_table:
        raise BudgetExceeded("proof tables too large for influence decoding")
    R = inst.R
    fv = [TabulatedFunction.from_coloring_table(k, t_, k) for t_ in proof.tables]
    v_inf, sugg_v = [], []
    for f in fv:
        low = influences(f, 2 * t).low
        v_inf.append(tuple(float(a) for a in low))
        sugg_v.append(tuple(i for i in range(2 * R) if low[i] >= delta / 4))
    u_inf, sugg_u = [], []
    for u in range(inst.n_u):
        acc = None
        nbrs = inst.neighbourhood(u)
        for e in nbrs:
            _, v, proj = inst.edges[e]
            sigma = block_permutation(proj)
            perm = TabulatedFunction(k, 2 * R, np.transpose(fv[v].values, axes=invert(sigma) + (2 * R,)),
                                     simplex=True)
            g = bar_function(perm).values
            acc = g if acc is None else acc + g
        gu = TabulatedFunction(k * k, R, acc / len(nbrs), simplex=True)
        low = influences(gu, t).low
        u_inf.append(tuple(float(a) for a in low))
        sugg_u.append(tuple(i for i in range(R) if low[i] >= delta))
    lab = Labeling(tuple(s[0] if s else 0 for s in sugg_u), tuple(s[0] if s else 0 for s in sugg_v))
    return InfluenceDecode(tuple(sugg_u), tuple(sugg_v), tuple(u_inf), tuple(v_inf),
                           lab, labeling_value(inst, lab), t, delta)
