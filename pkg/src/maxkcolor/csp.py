"""Tripartite CSP with constraints (x or Y = z_k) and (not x or Y = z_l).

Variables come in three pools X, Y, Z. Only the Y variable may appear
negated; Z variables are always positive, which is enforced by the shape of
:class:`Constraint` itself.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .graph import BudgetExceeded


@dataclass(frozen=True)
class Constraint:
    x: int
    y: int
    y_negated: bool
    zk: int
    zl: int


@dataclass(frozen=True)
class CspInstance:
    nx: int
    ny: int
    nz: int
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        if min(self.nx, self.ny, self.nz) < 0:
            raise ValueError("variable counts must be non-negative")
        cons = tuple(self.constraints)
        for i, c in enumerate(cons):
            if not (0 <= c.x < self.nx and 0 <= c.y < self.ny and 0 <= c.zk < self.nz and 0 <= c.zl < self.nz):
                raise ValueError(f"constraint {i} references a variable out of range: {c}")
        object.__setattr__(self, "constraints", cons)

    @property
    def m(self) -> int:
        return len(self.constraints)

    @property
    def n_vars(self) -> int:
        return self.nx + self.ny + self.nz


@dataclass(frozen=True)
class Assignment:
    x: tuple[int, ...]
    y: tuple[int, ...]
    z: tuple[int, ...]

    def __post_init__(self):
        for name in ("x", "y", "z"):
            vals = tuple(int(b) for b in getattr(self, name))
            if any(b not in (0, 1) for b in vals):
                raise ValueError(f"assignment to {name} must be 0/1")
            object.__setattr__(self, name, vals)

    def fits(self, inst: CspInstance) -> bool:
        return (len(self.x), len(self.y), len(self.z)) == (inst.nx, inst.ny, inst.nz)

    @classmethod
    def from_bits(cls, inst: CspInstance, bits) -> "Assignment":
        bits = tuple(bits)
        a, b = inst.nx, inst.nx + inst.ny
        return cls(bits[:a], bits[a:b], bits[b:])


def literal_value(c: Constraint, a: Assignment) -> int:
    return a.y[c.y] ^ int(c.y_negated)


def eval_constraint(c: Constraint, a: Assignment) -> bool:
    Y = literal_value(c, a)
    if a.x[c.x]:
        return Y == a.z[c.zl]
    return Y == a.z[c.zk]


def count_satisfied(inst: CspInstance, a: Assignment) -> int:
    if not a.fits(inst):
        raise ValueError("assignment does not match the instance's variable pools")
    return sum(eval_constraint(c, a) for c in inst.constraints)


def exact_max_sat(inst: CspInstance, budget: int = 1 << 20) -> tuple[Assignment, int]:
    """Brute-force maximum satisfiability; ties go to the lexicographically
    smallest bit string over (x..., y..., z...)."""
    size = 1 << inst.n_vars
    if size > budget:
        raise BudgetExceeded(f"2^{inst.n_vars} assignments exceed budget {budget}")
    best_bits, best = None, -1
    for bits in itertools.product((0, 1), repeat=inst.n_vars):
        a = Assignment.from_bits(inst, bits)
        s = count_satisfied(inst, a)
        if s > best:
            best_bits, best = bits, s
            if best == inst.m:
                break
    return Assignment.from_bits(inst, best_bits), best


def _check_pools(nx, ny, nz, m):
    if m < 0:
        raise ValueError("m must be non-negative")
    if m > 0 and min(nx, ny, nz) < 1:
        raise ValueError("constraints need non-empty X, Y and Z pools")


def generate_random(seed, nx: int, ny: int, nz: int, m: int) -> CspInstance:
    _check_pools(nx, ny, nz, m)
    rng = np.random.default_rng(seed)
    cons = []
    for _ in range(m):
        cons.append(Constraint(
            int(rng.integers(nx)), int(rng.integers(ny)), bool(rng.integers(2)),
            int(rng.integers(nz)), int(rng.integers(nz)),
        ))
    return CspInstance(nx, ny, nz, tuple(cons))


def generate_planted(seed, nx: int, ny: int, nz: int, m: int) -> tuple[CspInstance, Assignment]:
    """Random instance together with an assignment satisfying every constraint.

    Each drawn constraint is repaired only in its active z slot: the slot is
    redirected to a z variable carrying the literal's value, and if no such
    variable exists the sign of the y literal is flipped instead.
    """
    _check_pools(nx, ny, nz, m)
    rng = np.random.default_rng(seed)
    a = Assignment(
        tuple(int(b) for b in rng.integers(2, size=nx)),
        tuple(int(b) for b in rng.integers(2, size=ny)),
        tuple(int(b) for b in rng.integers(2, size=nz)),
    )
    cons = []
    for _ in range(m):
        x, y = int(rng.integers(nx)), int(rng.integers(ny))
        neg = bool(rng.integers(2))
        zk, zl = int(rng.integers(nz)), int(rng.integers(nz))
        Y = a.y[y] ^ int(neg)
        slot = zl if a.x[x] else zk
        if a.z[slot] != Y:
            matching = [i for i in range(nz) if a.z[i] == Y]
            if matching:
                slot = matching[int(rng.integers(len(matching)))]
            else:
                neg = not neg
        if a.x[x]:
            zl = slot
        else:
            zk = slot
        cons.append(Constraint(x, y, neg, zk, zl))
    inst = CspInstance(nx, ny, nz, tuple(cons))
    assert count_satisfied(inst, a) == m
    return inst, a
