"""Weights and Weyl-group combinatorics for similitude unitary groups.

A weight is ``((a_{tau,1..n})_tau ; a0)``; the Weyl group is a product of
symmetric groups, one per place of the CM type.  Permutations are stored in
one-line notation with 1-based values, ``perm[i-1] = w(i)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from math import comb
from typing import Sequence

from .symlaurent import DomainError

Perm = tuple[int, ...]


@dataclass(frozen=True)
class CompactShape:
    places: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.places:
            raise DomainError("a shape needs at least one place")
        n = sum(self.places[0])
        for r, s in self.places:
            if r < 0 or s < 0 or r + s != n:
                raise DomainError(f"signature {(r, s)} does not add up to n={n}")

    @classmethod
    def uniform(cls, r: int, s: int, e: int = 1) -> "CompactShape":
        return cls(((r, s),) * e)

    @property
    def n(self) -> int:
        return sum(self.places[0])

    @property
    def e(self) -> int:
        return len(self.places)

    @property
    def d(self) -> int:
        return sum(r * s for r, s in self.places)

    def coset_count(self) -> int:
        out = 1
        for r, _ in self.places:
            out *= comb(self.n, r)
        return out


@dataclass(frozen=True)
class WeightVector:
    rows: tuple[tuple[int, ...], ...]
    a0: int = 0

    def __post_init__(self):
        if len({len(r) for r in self.rows}) > 1:
            raise DomainError("weight rows have different lengths")

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]], a0: int = 0) -> "WeightVector":
        return cls(tuple(tuple(int(x) for x in r) for r in rows), int(a0))

    def __str__(self):
        body = ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.rows)
        return f"({body}; {self.a0})"


@dataclass(frozen=True)
class WeylElem:
    perms: tuple[Perm, ...]

    def __post_init__(self):
        for p in self.perms:
            if sorted(p) != list(range(1, len(p) + 1)):
                raise DomainError(f"{p} is not a permutation")

    def __mul__(self, other: "WeylElem") -> "WeylElem":
        # (self*other)(i) = self(other(i))
        return WeylElem(tuple(tuple(a[b[i] - 1] for i in range(len(b))) for a, b in zip(self.perms, other.perms)))

    def inverse(self) -> "WeylElem":
        out = []
        for p in self.perms:
            inv = [0] * len(p)
            for i, v in enumerate(p, 1):
                inv[v - 1] = i
            out.append(tuple(inv))
        return WeylElem(tuple(out))


def identity(shape: CompactShape) -> WeylElem:
    return WeylElem((tuple(range(1, shape.n + 1)),) * shape.e)


def longest(shape: CompactShape) -> WeylElem:
    n = shape.n
    return WeylElem((tuple(range(n, 0, -1)),) * shape.e)


def longest_compact(shape: CompactShape) -> WeylElem:
    n = shape.n
    return WeylElem(
        tuple(tuple(r + 1 - i if i <= r else n + r + 1 - i for i in range(1, n + 1)) for r, _ in shape.places)
    )


def longest_coset(shape: CompactShape) -> WeylElem:
    """The element ``i -> i + r`` for ``i <= s`` and ``i -> i - s`` otherwise."""
    n = shape.n
    return WeylElem(tuple(tuple(i + r if i <= s else i - s for i in range(1, n + 1)) for r, s in shape.places))


def xi(mu: WeightVector) -> int:
    return 2 * mu.a0 + sum(sum(r) for r in mu.rows)


def is_dominant(mu: WeightVector, shape: CompactShape, kind: str = "full") -> bool:
    if kind not in ("full", "compact"):
        raise DomainError(f"unknown dominance kind {kind!r}")
    for row, (r, _) in zip(mu.rows, shape.places):
        blocks = [row] if kind == "full" else [row[:r], row[r:]]
        for b in blocks:
            if any(x < y for x, y in zip(b, b[1:])):
                return False
    return True


def conj_weight(mu: WeightVector) -> WeightVector:
    return WeightVector(tuple(tuple(-x for x in reversed(r)) for r in mu.rows), mu.a0 + sum(sum(r) for r in mu.rows))


def dual_weight(mu: WeightVector) -> WeightVector:
    return WeightVector(tuple(tuple(-x for x in reversed(r)) for r in mu.rows), -mu.a0)


def is_self_conjugate(mu: WeightVector) -> bool:
    return conj_weight(mu) == mu


def act(w: WeylElem, mu: WeightVector) -> WeightVector:
    """Linear action: ``w(a)_{w(i)} = a_i``."""
    rows = []
    for p, row in zip(w.perms, mu.rows):
        out = [0] * len(row)
        for i, x in enumerate(row):
            out[p[i] - 1] = x
        rows.append(tuple(out))
    return WeightVector(tuple(rows), mu.a0)


def length(w: WeylElem) -> int:
    total = 0
    for p in w.perms:
        total += sum(1 for i, j in combinations(range(len(p)), 2) if p[i] > p[j])
    return total


def enumerate_W1(shape: CompactShape) -> list[WeylElem]:
    """Minimal coset representatives, ordered lexicographically by the
    subsets ``w^{-1}({1..r})`` place by place."""
    n = shape.n
    per_place = []
    for r, _ in shape.places:
        options = []
        for first in combinations(range(1, n + 1), r):
            rest = [i for i in range(1, n + 1) if i not in first]
            inv = tuple(first) + tuple(rest)  # inv[k-1] = w^{-1}(k)
            perm = [0] * n
            for k, v in enumerate(inv, 1):
                perm[v - 1] = k
            options.append(tuple(perm))
        per_place.append(options)
    return [WeylElem(tuple(choice)) for choice in product(*per_place)]


def in_W1(w: WeylElem, shape: CompactShape) -> bool:
    inv = w.inverse()
    for p, (r, _) in zip(inv.perms, shape.places):
        for block in (p[:r], p[r:]):
            if any(x > y for x, y in zip(block, block[1:])):
                return False
    return True


def flat(w: WeylElem, shape: CompactShape) -> WeylElem:
    return longest_compact(shape) * w * longest(shape)


def dot_action(w: WeylElem, mu: WeightVector, shape: CompactShape) -> WeightVector:
    """``w(mu + rho) - rho`` computed in doubled coordinates."""
    n = shape.n
    rho2 = tuple(n + 1 - 2 * i for i in range(1, n + 1))
    doubled = WeightVector(tuple(tuple(2 * x + r for x, r in zip(row, rho2)) for row in mu.rows), mu.a0)
    moved = act(w, doubled)
    rows = []
    for row in moved.rows:
        diff = [x - r for x, r in zip(row, rho2)]
        if any(v % 2 for v in diff):
            raise AssertionError("dot action left the integral lattice")
        rows.append(tuple(v // 2 for v in diff))
    return WeightVector(tuple(rows), mu.a0)


def lambda_flat(lam: WeightVector, shape: CompactShape) -> WeightVector:
    if not is_dominant(lam, shape, "compact"):
        raise DomainError(f"{lam} is not compact-dominant for {shape.places}")
    rows = []
    for row, (r, s) in zip(lam.rows, shape.places):
        first = tuple(-x - s for x in reversed(row[:r]))
        second = tuple(-x + r for x in reversed(row[r:]))
        rows.append(first + second)
    return WeightVector(tuple(rows), xi(lam) - lam.a0)


def hodge_pq(lam: WeightVector, shape: CompactShape) -> tuple[int, int]:
    p = -lam.a0 - sum(sum(row[:r]) for row, (r, _) in zip(lam.rows, shape.places))
    q = -lam.a0 - sum(sum(row[r:]) for row, (r, _) in zip(lam.rows, shape.places))
    return p, q


def mu_of_eta(eta, n: int, phi: Sequence[str] | None = None) -> WeightVector:
    """Weight attached to an infinity type through the determinant.

    ``phi`` lists the chosen embedding of each conjugate pair; by default
    the first member of every pair.
    """
    chosen = list(phi) if phi is not None else [t for t, _ in eta.pairs]
    rows = []
    a0 = 0
    for tau in chosen:
        bar = eta.conjugate(tau)
        diff = eta.values[tau] - eta.values[bar]
        rows.append((diff,) * n)
        a0 += n * eta.values[bar]
    return WeightVector(tuple(rows), a0)


@dataclass(frozen=True)
class HodgeIndex:
    element: WeylElem
    length: int
    p: int
    q: int


def hodge_decomposition_indices(mu: WeightVector, shape: CompactShape, degree: int) -> list[HodgeIndex]:
    """Hodge types of the Weyl components contributing in ``degree``.

    At the middle degree ``d`` the type q is cross-checked against
    ``p_{w-flat * mu}``; that identity needs ``c(mu) = mu``.
    """
    if not is_dominant(mu, shape, "full"):
        raise DomainError(f"{mu} is not dominant")
    weight = xi(mu)
    check_flat = degree == shape.d and is_self_conjugate(mu)
    out = []
    for w in enumerate_W1(shape):
        p, _ = hodge_pq(dot_action(w, mu, shape), shape)
        q = degree - weight - p
        if check_flat:
            q_flat, _ = hodge_pq(dot_action(flat(w, shape), mu, shape), shape)
            if q_flat != q:
                raise AssertionError(f"q={q} disagrees with p of the flat component {q_flat}")
        out.append(HodgeIndex(w, length(w), p, q))
    return out
