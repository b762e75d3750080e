"""Exact sparse Laurent polynomials over Q in tagged symbols.

Symbols live in a :class:`SymbolTable`; each carries a set of unit-class
labels.  A symbol counts as a unit for a context label when one of its
classes is contained in the context along the containment DAG of a
:class:`UnitClasses` configuration.

Monomials are stored as sorted tuples ``((index, exponent), ...)`` with no
zero exponents.  The monomial order is lexicographic on symbol insertion
order, which makes leading terms (and therefore proportionality tests and
canonical strings) deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from typing import Iterable, Mapping, Sequence

Key = tuple[tuple[int, int], ...]


class DimensionError(ValueError):
    pass


class DomainError(ValueError):
    pass


class UnitClasses:
    """Partially ordered set of unit-class labels.

    ``edges`` maps a label to the labels that directly contain it.
    """

    def __init__(self, edges: Mapping[str, Iterable[str]]):
        parents: dict[str, frozenset[str]] = {}
        for label, ups in edges.items():
            parents[label] = frozenset(ups)
            for up in ups:
                parents.setdefault(up, frozenset())
        try:
            tuple(TopologicalSorter(parents).static_order())
        except CycleError as exc:
            raise DomainError(f"containment relation has a cycle: {exc.args[1]}") from None
        self._parents = parents
        self._above: dict[str, frozenset[str]] = {}

    @property
    def labels(self) -> frozenset[str]:
        return frozenset(self._parents)

    def above(self, label: str) -> frozenset[str]:
        """All labels containing ``label``, itself included."""
        if label not in self._parents:
            raise KeyError(f"unknown unit class {label!r}")
        cached = self._above.get(label)
        if cached is None:
            seen = {label}
            stack = [label]
            while stack:
                for up in self._parents[stack.pop()]:
                    if up not in seen:
                        seen.add(up)
                        stack.append(up)
            cached = self._above[label] = frozenset(seen)
        return cached

    def contained_in(self, label: str, context: str) -> bool:
        return context in self.above(label)


# Fields modelled by the labels:
#   RATIONAL Q, E_TENSOR_K E(x)K, QCHI_TENSOR_K Q(chi)(x)K,
#   QCHI_E_TENSOR_K (E(x)Q(chi))(x)K, K_GALOIS K', E_TENSOR_KGAL E(x)K',
#   L_GALOIS L', E_PSI_E E(psi)E without L', E_PSI_E_LGAL E(psi)EL',
#   ALGEBRAIC the algebraic closure.  TRANSCENDENTAL is contained in nothing.
DEFAULT_CLASSES = UnitClasses(
    {
        "RATIONAL": ["E_TENSOR_K", "QCHI_TENSOR_K", "K_GALOIS", "E_PSI_E"],
        "E_TENSOR_K": ["E_TENSOR_KGAL", "QCHI_E_TENSOR_K"],
        "QCHI_TENSOR_K": ["QCHI_E_TENSOR_K"],
        "QCHI_E_TENSOR_K": ["E_PSI_E_LGAL"],
        "K_GALOIS": ["E_TENSOR_KGAL", "L_GALOIS"],
        "E_TENSOR_KGAL": ["E_PSI_E_LGAL"],
        "L_GALOIS": ["E_PSI_E_LGAL"],
        "E_PSI_E": ["E_PSI_E_LGAL"],
        "E_PSI_E_LGAL": ["ALGEBRAIC"],
        "ALGEBRAIC": [],
        "TRANSCENDENTAL": [],
    }
)


class SymbolTable:
    """Append-only table of named symbols with unit-class tags."""

    def __init__(self, classes: UnitClasses = DEFAULT_CLASSES):
        self.classes = classes
        self._names: list[str] = []
        self._tags: list[frozenset[str]] = []
        self._index: dict[str, int] = {}

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def add(self, name: str, unit_classes: Iterable[str] = ("TRANSCENDENTAL",)) -> int:
        tags = frozenset(unit_classes)
        for tag in tags:
            if tag not in self.classes.labels:
                raise DomainError(f"unknown unit class {tag!r} for symbol {name!r}")
        if name in self._index:
            i = self._index[name]
            if self._tags[i] != tags:
                raise DomainError(f"symbol {name!r} already registered with classes {sorted(self._tags[i])}")
            return i
        self._index[name] = len(self._names)
        self._names.append(name)
        self._tags.append(tags)
        return self._index[name]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown symbol {name!r}") from None

    def name(self, i: int) -> str:
        return self._names[i]

    def tags(self, i: int) -> frozenset[str]:
        return self._tags[i]

    def is_unit(self, i: int, context: str) -> bool:
        return any(self.classes.contained_in(tag, context) for tag in self._tags[i])

    def var(self, name: str, exponent: int = 1) -> "LaurentPoly":
        return LaurentPoly.monomial(self, {name: exponent})

    def const(self, value) -> "LaurentPoly":
        return LaurentPoly.constant(self, value)


@dataclass(frozen=True)
class Monomial:
    exponents: Key
    coefficient: Fraction

    def render(self, table: SymbolTable) -> str:
        return _render_term(table, self.exponents, self.coefficient)


def _mul_keys(a: Key, b: Key) -> Key:
    if not a:
        return b
    if not b:
        return a
    out = dict(a)
    for i, e in b:
        v = out.get(i, 0) + e
        if v:
            out[i] = v
        else:
            del out[i]
    return tuple(sorted(out.items()))


def _neg_key(a: Key) -> Key:
    return tuple((i, -e) for i, e in a)


def _render_term(table: SymbolTable, key: Key, coeff: Fraction) -> str:
    factors = []
    for i, e in key:
        name = table.name(i)
        factors.append(name if e == 1 else f"{name}^{e}")
    if not factors:
        return str(coeff)
    if coeff == 1:
        return "*".join(factors)
    if coeff == -1:
        return "-" + "*".join(factors)
    return f"{coeff}*" + "*".join(factors)


class LaurentPoly:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("table", "_terms")

    def __init__(self, table: SymbolTable, terms: Mapping[Key, Fraction] | None = None):
        self.table = table
        self._terms: dict[Key, Fraction] = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def constant(cls, table: SymbolTable, value) -> "LaurentPoly":
        return cls(table, {(): Fraction(value)})

    @classmethod
    def monomial(cls, table: SymbolTable, exponents: Mapping[str, int], coefficient=1) -> "LaurentPoly":
        key = tuple(sorted((table.index(n), e) for n, e in exponents.items() if e))
        return cls(table, {key: Fraction(coefficient)})

    @property
    def terms(self) -> Mapping[Key, Fraction]:
        return self._terms

    def monomials(self) -> list[Monomial]:
        return [Monomial(k, self._terms[k]) for k in self._sorted_keys()]

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.table is not self.table:
                raise DomainError("polynomials belong to different symbol tables")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.table, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly(self.table, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.table, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Key, Fraction] = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = _mul_keys(ka, kb)
                v = out.get(k, 0) + ca * cb
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return LaurentPoly(self.table, out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            if not self.is_monomial():
                raise DomainError("negative powers only exist for monomials")
            ((k, c),) = self._terms.items()
            base = LaurentPoly(self.table, {_neg_key(k): 1 / c})
            exponent = -exponent
        else:
            base = self
        result = LaurentPoly.constant(self.table, 1)
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def order_key(self, key: Key) -> tuple[int, ...]:
        dense = [0] * len(self.table)
        for i, e in key:
            dense[i] = e
        return tuple(dense)

    def _sorted_keys(self) -> list[Key]:
        return sorted(self._terms, key=self.order_key, reverse=True)

    def leading_term(self) -> Monomial:
        if not self._terms:
            raise DomainError("zero polynomial has no leading term")
        k = max(self._terms, key=self.order_key)
        return Monomial(k, self._terms[k])

    def scale(self, coefficient, key: Key = ()) -> "LaurentPoly":
        c = Fraction(coefficient)
        return LaurentPoly(self.table, {_mul_keys(k, key): v * c for k, v in self._terms.items()})

    def symbols(self) -> set[int]:
        return {i for k in self._terms for i, _ in k}

    def __str__(self):
        if not self._terms:
            return "0"
        out = ""
        for n, k in enumerate(self._sorted_keys()):
            term = _render_term(self.table, k, self._terms[k])
            if n == 0:
                out = term
            elif term.startswith("-"):
                out += " - " + term[1:]
            else:
                out += " + " + term
        return out

    def __repr__(self):
        return f"LaurentPoly({self})"


class RatFunc:
    """Quotient of Laurent polynomials.

    No multivariate gcd is attempted: when the denominator is a single
    monomial the quotient is folded into the numerator; otherwise the pair
    is kept as is and marked unreduced.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: LaurentPoly, denominator: LaurentPoly | None = None):
        if denominator is None:
            denominator = LaurentPoly.constant(numerator.table, 1)
        if denominator.is_zero():
            raise DomainError("zero denominator")
        if denominator.is_monomial():
            numerator = numerator * denominator ** -1
            denominator = LaurentPoly.constant(numerator.table, 1)
        self.numerator = numerator
        self.denominator = denominator

    @property
    def reduced(self) -> bool:
        return self.denominator == 1

    def inverse(self) -> "RatFunc":
        return RatFunc(self.denominator, self.numerator)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        return RatFunc(self.numerator * other.numerator, self.denominator * other.denominator)

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __str__(self):
        if self.reduced:
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"


def det(matrix: Sequence[Sequence[LaurentPoly]], table: SymbolTable | None = None) -> LaurentPoly:
    """Determinant by cofactor expansion memoized over column subsets."""
    n = len(matrix)
    for row in matrix:
        if len(row) != n:
            raise DimensionError(f"matrix is not square: {n} rows, a row of length {len(row)}")
    if table is None:
        table = matrix[0][0].table if n else SymbolTable()
    one = LaurentPoly.constant(table, 1)
    if n == 0:
        return one
    memo: dict[int, LaurentPoly] = {}

    def minor(row: int, cols: int) -> LaurentPoly:
        # cols is a bitmask of the n - row columns still available
        if row == n:
            return one
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = LaurentPoly(table)
        sign = 1
        for j in range(n):
            if not cols >> j & 1:
                continue
            entry = matrix[row][j]
            if not entry.is_zero():
                term = entry * minor(row + 1, cols & ~(1 << j))
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[cols] = total
        return total

    return minor(0, (1 << n) - 1)


def proportional_up_to_units(
    lhs: LaurentPoly, rhs: LaurentPoly, unit_context: str
) -> tuple[Fraction, Monomial] | None:
    """Find ``(c, m)`` with ``lhs == c*m*rhs`` and ``m`` a unit monomial.

    Returns None when the polynomials are not proportional by such a factor.
    """
    if rhs.is_zero():
        raise DomainError("right-hand side is zero")
    if lhs.is_zero():
        return None
    lead_l, lead_r = lhs.leading_term(), rhs.leading_term()
    key = _mul_keys(lead_l.exponents, _neg_key(lead_r.exponents))
    coeff = lead_l.coefficient / lead_r.coefficient
    table = lhs.table
    if not all(table.is_unit(i, unit_context) for i, _ in key):
        return None
    if rhs.scale(coeff, key) != lhs:
        return None
    return coeff, Monomial(key, Fraction(1))
