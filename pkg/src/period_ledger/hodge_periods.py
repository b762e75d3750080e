"""Regular polarized Hodge-de Rham structures through generic coordinates.

A :class:`PolarizedInstance` stores the coordinates of the Hodge-adapted
basis Omega_1..Omega_d against the +1 and -1 eigenbases of Frobenius.
Only the columns j <= floor(d/2) (and the middle column for odd d) are free
symbols; the mirrored column d+1-j is forced by

    F(Omega_j) = lambda_j Omega_{d+1-j},   lambda_j lambda_{d+1-j} = 1,

which gives a+-_{i,d+1-j} = +-lambda_j^{-1} a+-_{i,j}.  Because every
symbol is generic, an identity verified on the instance holds for all
structures of the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .ledger import Axiom, PeriodExpr, prod, sym
from .symlaurent import DomainError, LaurentPoly, RatFunc, SymbolTable, det


class DegenerateInstance(DomainError):
    pass


@dataclass(frozen=True)
class HodgeProfile:
    """Strictly decreasing Hodge numbers per (sigma, phi) for a fixed weight."""

    d: int
    w: int
    p: Mapping[tuple[str, str], tuple[int, ...]] = field(hash=False)

    def __post_init__(self):
        for key, vec in self.p.items():
            if len(vec) != self.d:
                raise DomainError(f"{key}: expected {self.d} Hodge numbers, got {len(vec)}")
            if any(a <= b for a, b in zip(vec, vec[1:])):
                raise DomainError(f"{key}: Hodge numbers {vec} are not strictly decreasing")

    @classmethod
    def uniform(cls, p, w: int, places: Iterable[str] = ("sigma1",), phi: str = "phi1") -> "HodgeProfile":
        p = tuple(int(x) for x in p)
        return cls(len(p), int(w), {(s, phi): p for s in places})

    @classmethod
    def per_place(cls, vectors, w: int, phi: str = "phi1") -> "HodgeProfile":
        vectors = [tuple(int(x) for x in v) for v in vectors]
        return cls(len(vectors[0]), int(w), {(f"sigma{k}", phi): v for k, v in enumerate(vectors, 1)})

    def keys(self):
        return sorted(self.p)

    def is_polarized(self) -> bool:
        """Hodge symmetry p_i + p_{d+1-i} = w at every key."""
        return all(v[i] + v[self.d - 1 - i] == self.w for v in self.p.values() for i in range(self.d))


@dataclass(frozen=True)
class FrobeniusData:
    lambdas: tuple[LaurentPoly, ...]
    epsilon: int


@dataclass(frozen=True)
class PolarizedInstance:
    d: int
    d_plus: int
    d_minus: int
    epsilon: int
    A_trivial: bool
    table: SymbolTable
    plus: tuple[tuple[LaurentPoly, ...], ...]
    minus: tuple[tuple[LaurentPoly, ...], ...]
    frobenius: FrobeniusData
    mus: tuple[LaurentPoly, ...]
    delta_A: LaurentPoly
    sigma: str = "sigma1"

    @property
    def artin(self) -> str:
        return "triv" if self.A_trivial else "A"

    def comparison_matrix(self) -> list[list[LaurentPoly]]:
        return [list(r) for r in self.plus] + [list(r) for r in self.minus]

    def lam(self, j: int) -> LaurentPoly:
        return self.frobenius.lambdas[j - 1]


def _sign_mismatch(d: int, d_plus: int, epsilon: int) -> str | None:
    if d % 2 == 0:
        if d_plus != d // 2:
            return (
                f"d={d} is even, so Frobenius swaps the lines Omega_j and Omega_(d+1-j) in pairs"
                f" and forces d+ = d- = {d // 2}; got d+ = {d_plus}"
            )
        return None
    m = (d + 1) // 2
    if d_plus not in (m, m - 1):
        return f"d={d} is odd, so d+ must be {m} or {m - 1}; got {d_plus}"
    expected = 1 if d_plus == m else -1
    if epsilon != expected:
        return f"d={d}, d+={d_plus} forces Frobenius to act by {expected:+d} on the middle line; got {epsilon:+d}"
    return None


def admissible_signatures(d: int) -> list[tuple[int, int]]:
    """All (d+, epsilon) pairs that a regular structure of rank d can have."""
    if d % 2 == 0:
        return [(d // 2, 1), (d // 2, -1)]
    m = (d + 1) // 2
    return [(m, 1), (m - 1, -1)]


def build_generic_instance(
    d: int,
    d_plus: int,
    epsilon: int = 1,
    A_trivial: bool = True,
    table: SymbolTable | None = None,
    sigma: str = "sigma1",
) -> PolarizedInstance:
    if d < 1 or not 0 <= d_plus <= d:
        raise DomainError(f"need d >= 1 and 0 <= d+ <= d, got d={d}, d+={d_plus}")
    if epsilon not in (1, -1):
        raise DomainError("epsilon must be +1 or -1")
    problem = _sign_mismatch(d, d_plus, epsilon)
    if problem:
        raise DomainError(problem)
    table = table if table is not None else SymbolTable()
    d_minus = d - d_plus
    half = d // 2
    mid = (d + 1) // 2 if d % 2 else None
    zero = LaurentPoly(table)

    # registration order fixes the monomial order
    for tag, rows in (("ap", d_plus), ("am", d_minus)):
        for i in range(1, rows + 1):
            for j in range(1, half + 1):
                table.add(f"{tag}_{i}_{j}")
            if mid and ((tag == "ap") == (epsilon == 1)):
                table.add(f"{tag}_{i}_{mid}")
    for j in range(1, half + 1):
        table.add(f"lam_{j}")
    for j in range(1, d + 1):
        table.add(f"mu_{j}", ("E_TENSOR_K",))
    table.add("dA" if A_trivial else "dA_art", ("E_TENSOR_K",) if A_trivial else ("ALGEBRAIC",))
    delta_A = table.var("dA" if A_trivial else "dA_art")

    lambdas = []
    for j in range(1, d + 1):
        if j <= half:
            lambdas.append(table.var(f"lam_{j}"))
        elif mid and j == mid:
            lambdas.append(table.const(epsilon))
        else:
            lambdas.append(table.var(f"lam_{d + 1 - j}", -1))

    def block(tag: str, rows: int, sign: int) -> tuple[tuple[LaurentPoly, ...], ...]:
        out = []
        for i in range(1, rows + 1):
            row = []
            for j in range(1, d + 1):
                if j <= half:
                    row.append(table.var(f"{tag}_{i}_{j}"))
                elif mid and j == mid:
                    row.append(table.var(f"{tag}_{i}_{j}") if sign == epsilon else zero)
                else:
                    row.append(table.var(f"lam_{d + 1 - j}", -1) * table.var(f"{tag}_{i}_{d + 1 - j}") * sign)
            out.append(tuple(row))
        return tuple(out)

    inst = PolarizedInstance(
        d=d,
        d_plus=d_plus,
        d_minus=d_minus,
        epsilon=epsilon,
        A_trivial=A_trivial,
        table=table,
        plus=block("ap", d_plus, 1),
        minus=block("am", d_minus, -1),
        frobenius=FrobeniusData(tuple(lambdas), epsilon),
        mus=tuple(table.var(f"mu_{j}") for j in range(1, d + 1)),
        delta_A=delta_A,
        sigma=sigma,
    )
    _check_relations(inst)
    return inst


def quadratic_period_poly(inst: PolarizedInstance, j: int) -> LaurentPoly:
    if not 1 <= j <= inst.d:
        raise DomainError(f"index {j} outside 1..{inst.d}")
    return inst.lam(j) * inst.mus[j - 1] * inst.delta_A ** -1


def _check_relations(inst: PolarizedInstance) -> None:
    d = inst.d
    for j in range(1, d + 1):
        lam, lam_bar = inst.lam(j), inst.lam(d + 1 - j)
        if lam * lam_bar != 1:
            raise AssertionError(f"lambda_{j} lambda_{d + 1 - j} != 1")
        # a+-_{i,d+1-j} = +- delta_A^-1 mu_j Q_j^-1 a+-_{i,j}
        factor = inst.delta_A ** -1 * inst.mus[j - 1] * quadratic_period_poly(inst, j) ** -1
        for sign, rows in ((1, inst.plus), (-1, inst.minus)):
            for row in rows:
                if row[d - j] != row[j - 1] * factor * sign:
                    raise AssertionError(f"column relation fails at j={j}")


def comparison_det(inst: PolarizedInstance) -> LaurentPoly:
    return det(inst.comparison_matrix(), inst.table)


def delta_of(inst: PolarizedInstance) -> RatFunc:
    value = comparison_det(inst)
    if value.is_zero():
        raise DegenerateInstance("comparison determinant vanishes identically")
    return RatFunc(LaurentPoly.constant(inst.table, 1), value)


def c_dual_pm(inst: PolarizedInstance, sign: str) -> LaurentPoly:
    rows = {"+": inst.plus, "-": inst.minus}[sign]
    k = len(rows)
    return det([list(r[:k]) for r in rows], inst.table)


def quadratic_period(inst: PolarizedInstance, j: int) -> PeriodExpr:
    if not 1 <= j <= inst.d:
        raise DomainError(f"index {j} outside 1..{inst.d}")
    s = inst.sigma
    return prod(sym(f"Lambda({j},{s})"), sym(f"Mu({j},{s})"), sym(f"DeltaA({inst.artin},{s})", -1))


def quadratic_period_axioms(d: int, sigma: str = "sigma1", artin: str = "triv") -> list[Axiom]:
    """Definition of QMot_j plus the Frobenius pairing of the lambda_j."""
    out = []
    for j in range(1, d + 1):
        q = prod(sym(f"Lambda({j},{sigma})"), sym(f"Mu({j},{sigma})"), sym(f"DeltaA({artin},{sigma})", -1))
        out.append(
            Axiom(
                f"quadratic_period[{j},{sigma}]",
                sym(f"QMot({j},{sigma})") / q,
                "E_TENSOR_K",
                "Q_j = <Omega_j, F Omega_j> = lambda_j mu_j delta(A)^-1",
                "definition",
            )
        )
    for j in range(1, d // 2 + 1):
        out.append(
            Axiom(
                f"frobenius_pairing[{j},{sigma}]",
                sym(f"Lambda({j},{sigma})") * sym(f"Lambda({d + 1 - j},{sigma})"),
                "RATIONAL",
                "F Omega_j = lambda_j Omega_(d+1-j) and F^2 = 1 give lambda_j lambda_(d+1-j) = 1",
            )
        )
    if d % 2:
        k = (d + 1) // 2
        out.append(
            Axiom(
                f"frobenius_middle[{sigma}]",
                sym(f"Lambda({k},{sigma})"),
                "RATIONAL",
                "Frobenius acts by epsilon = +-1 on the middle line",
            )
        )
    return out


def twist_rules(
    d: int,
    d_plus: int,
    t: int,
    artin_eps: int | None = None,
    motive: str = "M",
    sigma: str = "sigma1",
    artin: str = "A",
) -> list[Axiom]:
    """Tate twist by ``t`` of ``motive`` and, if ``artin_eps`` is given, its
    twist by an Artin motive on which complex conjugation acts by ``artin_eps``."""
    d_of = {"+": d_plus, "-": d - d_plus}
    flip = {"+": "-", "-": "+"}
    twisted = motive if t == 0 else f"{motive}({t})"
    out = []
    for s in "+-":
        target = s if t % 2 == 0 else flip[s]
        out.append(
            Axiom(
                f"tate_twist[{motive},{t},{s},{sigma}]",
                prod(
                    sym(f"cPM({twisted},{sigma},{s})"),
                    sym("TwoPiI", -t * d_of[target]),
                    sym(f"cPM({motive},{sigma},{target})", -1),
                ),
                "E_TENSOR_K",
                "c+-(M(t)) ~ (2 pi i)^(t d+-) c+-(M) for even t, (2 pi i)^(t d-+) c-+(M) for odd t",
            )
        )
    out.append(
        Axiom(
            f"tate_twist_delta[{motive},{t},{sigma}]",
            prod(sym(f"DeltaM({twisted},{sigma})"), sym("TwoPiI", -t * d), sym(f"DeltaM({motive},{sigma})", -1)),
            "E_TENSOR_K",
            "delta(M(t)) ~ (2 pi i)^(t d) delta(M)",
        )
    )
    if artin_eps is not None:
        if artin_eps not in (1, -1):
            raise DomainError("artin_eps must be +1 or -1")
        for s in "+-":
            source = s if artin_eps == 1 else flip[s]
            out.append(
                Axiom(
                    f"artin_twist[{motive},{artin},{s},{sigma}]",
                    prod(
                        sym(f"cPM({motive}*{artin},{sigma},{s})"),
                        sym(f"cPM({motive},{sigma},{source})", -1),
                        sym(f"DeltaA({artin},{sigma})", -d_of[source]),
                    ),
                    "E_TENSOR_K",
                    "c+-(M x [eps]) ~ c+-eps(M) delta([eps])^(d+-eps)",
                )
            )
    return out


def delta_square_axiom(d: int, w: int, sigma: str = "sigma1", artin: str = "triv", motive: str = "M") -> Axiom:
    return Axiom(
        f"delta_square[{motive},{sigma}]",
        prod(sym(f"DeltaM({motive},{sigma})", 2), sym(f"DeltaA({artin},{sigma})", -d), sym("TwoPiI", w * d)),
        "E_TENSOR_K",
        "delta_sigma(M)^2 ~ delta_sigma(A)^d (2 pi i)^(-w d)",
    )


def restriction_of_scalars_axioms(d: int, d_plus: int, e: int = 1, motive: str = "M") -> list[Axiom]:
    """Global periods as discriminant power times the product over places."""
    places = [f"sigma{k}" for k in range(1, e + 1)]
    d_of = {"+": d_plus, "-": d - d_plus}
    out = []
    for s in "+-":
        out.append(
            Axiom(
                f"global_c[{motive},{s}]",
                prod(
                    sym(f"cPM({motive},{s})"),
                    sym("DiscKHalf", -d_of[s]),
                    *(sym(f"cPM({motive},{p},{s})", -1) for p in places),
                ),
                "E_TENSOR_KGAL",
                "c+-(M) ~ D_K^(d+-/2) prod_sigma c+-_sigma(M)",
            )
        )
    out.append(
        Axiom(
            f"global_delta[{motive}]",
            prod(sym(f"DeltaM({motive})"), sym("DiscKHalf", -d), *(sym(f"DeltaM({motive},{p})", -1) for p in places)),
            "E_TENSOR_KGAL",
            "delta(M) ~ D_K^(d/2) prod_sigma delta_sigma(M)",
        )
    )
    return out


def check_hodge_riemann(profile: HodgeProfile, pairing_support: Iterable[tuple[int, int]]) -> bool:
    """Support of the pairing in the Hodge-adapted basis (1-based indices).

    The pairing must vanish on F^p x F^q when p + q > w and must see every
    anti-diagonal pair (i, d+1-i).
    """
    support = {(int(i), int(j)) for i, j in pairing_support}
    d = profile.d
    for vec in profile.p.values():
        for i, j in support:
            if vec[i - 1] + vec[j - 1] > profile.w:
                return False
    return all((i, d + 1 - i) in support for i in range(1, d + 1))
