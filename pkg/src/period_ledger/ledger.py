"""Period ledger: the free abelian group on period symbols.

A ``~`` fact "X is a unit of some field" is stored as an :class:`Axiom`
whose relation vector is the monomial X.  A derivation succeeds when the
target lies in the Z-span of the admissible axiom relations once symbols
that are units of the working context have been projected away.
Membership is decided through a Hermite normal form with a unimodular
transform, so every success comes with an integer certificate and every
failure with a reduced residual.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .symlaurent import DEFAULT_CLASSES, DomainError, UnitClasses

GRADES = ("theorem", "definition", "assumption", "analytic input", "conjecture", "verified identity")


class PeriodExpr(Mapping[str, int]):
    """Monomial in period symbols with integer exponents."""

    __slots__ = ("_items",)

    def __init__(self, exponents: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        acc: dict[str, int] = {}
        pairs = exponents.items() if isinstance(exponents, Mapping) else exponents
        for name, e in pairs:
            acc[name] = acc.get(name, 0) + int(e)
        self._items = tuple(sorted((k, v) for k, v in acc.items() if v))

    def __getitem__(self, name: str) -> int:
        for k, v in self._items:
            if k == name:
                return v
        raise KeyError(name)

    def get(self, name, default=0):
        return dict(self._items).get(name, default)

    def __iter__(self) -> Iterator[str]:
        return (k for k, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __mul__(self, other: "PeriodExpr") -> "PeriodExpr":
        return PeriodExpr(list(self._items) + list(other._items))

    def __truediv__(self, other: "PeriodExpr") -> "PeriodExpr":
        return self * other ** -1

    def __pow__(self, k: int) -> "PeriodExpr":
        return PeriodExpr((n, e * k) for n, e in self._items)

    def inverse(self) -> "PeriodExpr":
        return self ** -1

    def __eq__(self, other):
        if isinstance(other, PeriodExpr):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self == PeriodExpr(other)
        return NotImplemented

    def __hash__(self):
        return hash(self._items)

    def is_one(self) -> bool:
        return not self._items

    def __str__(self):
        if not self._items:
            return "1"
        return "*".join(n if e == 1 else f"{n}^{e}" for n, e in self._items)

    def __repr__(self):
        return f"PeriodExpr({self})"


def sym(name: str, exponent: int = 1) -> PeriodExpr:
    return PeriodExpr({name: exponent})


def prod(*factors: PeriodExpr) -> PeriodExpr:
    out = PeriodExpr()
    for f in factors:
        out = out * f
    return out


@dataclass(frozen=True)
class Axiom:
    """A relation vector asserted to be a unit modulo ``unit_context``."""

    name: str
    relation: PeriodExpr
    unit_context: str
    anchor: str
    grade: str = "theorem"

    def __post_init__(self):
        if not self.anchor:
            raise DomainError(f"axiom {self.name!r} has no citation anchor")
        if self.grade not in GRADES:
            raise DomainError(f"axiom {self.name!r} has unknown grade {self.grade!r}")


def unit_axiom(name: str, symbol: str, unit_context: str, anchor: str, grade: str = "theorem") -> Axiom:
    return Axiom(name, sym(symbol), unit_context, anchor, grade)


# Default unit class of each symbol family; the family is the name up to "(".
FAMILY_CLASSES: dict[str, str] = {
    "TwoPiI": "TRANSCENDENTAL",
    "DiscKHalf": "K_GALOIS",
    "DeltaEpsL": "L_GALOIS",
    "DeltaA": "ALGEBRAIC",
    "DeltaM": "TRANSCENDENTAL",
    "Lambda": "TRANSCENDENTAL",
    "Mu": "E_TENSOR_K",
    "MuChi": "QCHI_TENSOR_K",
    "LambdaChi": "TRANSCENDENTAL",
    "QMot": "TRANSCENDENTAL",
    "QChi": "TRANSCENDENTAL",
    "cPM": "TRANSCENDENTAL",
    "aPM": "TRANSCENDENTAL",
    "ATilde": "TRANSCENDENTAL",
    "eTau": "RATIONAL",
    "eSigma": "RATIONAL",
    "CM": "TRANSCENDENTAL",
    "QHol": "TRANSCENDENTAL",
    "QAhol": "TRANSCENDENTAL",
    "QAut": "TRANSCENDENTAL",
    "QPiPsi": "TRANSCENDENTAL",
    "PairFF": "TRANSCENDENTAL",
    "LStd": "TRANSCENDENTAL",
    "LMot": "TRANSCENDENTAL",
    "dS": "TRANSCENDENTAL",
    "ZetaInt": "TRANSCENDENTAL",
    "DelM": "TRANSCENDENTAL",
    "Det": "TRANSCENDENTAL",
}

_FAMILY = re.compile(r"^([A-Za-z]+)")


def default_class(name: str) -> str:
    m = _FAMILY.match(name)
    family = m.group(1) if m else name
    if family == "DeltaA" and name.startswith("DeltaA(triv"):
        return "E_TENSOR_K"
    if family.startswith("Det"):
        family = "Det"
    try:
        return FAMILY_CLASSES[family]
    except KeyError:
        raise DomainError(f"symbol {name!r} is outside the period alphabet") from None


@dataclass
class Verdict:
    member: bool
    certificate: dict[str, int] = field(default_factory=dict)
    absorbed_units: dict[str, int] = field(default_factory=dict)
    residual: PeriodExpr = field(default_factory=PeriodExpr)
    excluded: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "member": self.member,
            "certificate": dict(sorted(self.certificate.items())),
            "absorbed_units": dict(sorted(self.absorbed_units.items())),
            "residual": str(self.residual),
            "excluded_axioms": list(self.excluded),
        }


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, nx, y, ny = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
    return x, y, a


def hermite_form(rows: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Row Hermite normal form ``H = U*rows`` with U unimodular.

    Returns the nonzero rows of H, the matching rows of U and the pivot
    columns.  Pivots are positive and entries above a pivot are reduced
    into ``[0, pivot)``.
    """
    m = len(rows)
    ncols = len(rows[0]) if rows else 0
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == m:
            break
        nz = [i for i in range(top, m) if H[i][col]]
        if not nz:
            continue
        p = nz[0]
        H[top], H[p] = H[p], H[top]
        U[top], U[p] = U[p], U[top]
        for i in nz[1:]:
            a, b = H[top][col], H[i][col]
            x, y, g = _xgcd(a, b)
            ag, bg = a // g, b // g
            H[top], H[i] = (
                [x * u + y * v for u, v in zip(H[top], H[i])],
                [-bg * u + ag * v for u, v in zip(H[top], H[i])],
            )
            U[top], U[i] = (
                [x * u + y * v for u, v in zip(U[top], U[i])],
                [-bg * u + ag * v for u, v in zip(U[top], U[i])],
            )
        if H[top][col] < 0:
            H[top] = [-v for v in H[top]]
            U[top] = [-v for v in U[top]]
        piv = H[top][col]
        for i in range(top):
            q = H[i][col] // piv
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[top])]
                U[i] = [u - q * v for u, v in zip(U[i], U[top])]
        pivots.append(col)
        top += 1
    return H[:top], U[:top], pivots


def lattice_check(
    target: PeriodExpr,
    axioms: Iterable[Axiom],
    unit_context: str,
    claim_context: str | None = None,
    classes: UnitClasses = DEFAULT_CLASSES,
    tags: Mapping[str, str] | None = None,
) -> Verdict:
    """Decide whether ``target`` is a unit given ``axioms``.

    Symbols whose class is contained in ``unit_context`` are discarded.
    Axioms are admissible when their own context is contained in
    ``claim_context`` (default: ``unit_context``); the rest are listed in
    ``Verdict.excluded``.  ``tags`` overrides the class of individual
    symbols.
    """
    claim = claim_context or unit_context
    tags = dict(tags or {})
    used: list[Axiom] = []
    excluded: list[str] = []
    for ax in axioms:
        if classes.contained_in(ax.unit_context, claim):
            used.append(ax)
        else:
            excluded.append(ax.name)

    def is_unit(name: str) -> bool:
        return classes.contained_in(tags.get(name) or default_class(name), unit_context)

    names = sorted({n for ax in used for n in ax.relation} | set(target))
    tracked = [n for n in names if not is_unit(n)]
    col = {n: i for i, n in enumerate(tracked)}

    def vec(expr: PeriodExpr) -> list[int]:
        v = [0] * len(tracked)
        for n, e in expr.items():
            if n in col:
                v[col[n]] = e
        return v

    rows = [vec(ax.relation) for ax in used]
    t = vec(target)
    H, U, pivots = hermite_form(rows) if rows else ([], [], [])
    coeffs = [0] * len(used)
    rest = list(t)
    for k, p in enumerate(pivots):
        q = rest[p] // H[k][p]
        if q:
            rest = [u - q * v for u, v in zip(rest, H[k])]
            coeffs = [c + q * u for c, u in zip(coeffs, U[k])]
    residual = PeriodExpr({tracked[i]: e for i, e in enumerate(rest) if e})
    if any(rest):
        return Verdict(False, residual=residual, excluded=excluded)
    combo = PeriodExpr()
    certificate: dict[str, int] = {}
    for ax, c in zip(used, coeffs):
        if c:
            certificate[ax.name] = certificate.get(ax.name, 0) + c
            combo = combo * ax.relation ** c
    if vec(combo) != t:
        raise AssertionError("certificate does not reproduce the target")
    absorbed = {n: e for n, e in (target / combo).items() if e}
    return Verdict(True, certificate, absorbed, PeriodExpr(), excluded)
