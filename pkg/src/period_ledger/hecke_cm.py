"""Algebraic Hecke characters of a CM field through their infinity types.

Embeddings are plain labels.  The places of the totally real subfield are
indexed by position: pair ``k`` of an :class:`InfinityType` is the pair of
CM embeddings above place ``sigma{k+1}``.  Only the combinatorics of the
infinity type and the CM-period relations they feed are modelled.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .ledger import Axiom, PeriodExpr, prod, sym
from .symlaurent import DomainError
from .weights import CompactShape


class CriticalityError(DomainError):
    pass


@dataclass(frozen=True)
class InfinityType:
    pairs: tuple[tuple[str, str], ...]
    values: Mapping[str, int] = field(hash=False)

    def __post_init__(self):
        labels = [t for pair in self.pairs for t in pair]
        if len(set(labels)) != len(labels):
            raise DomainError("conjugation must pair distinct embeddings")
        if set(labels) != set(self.values):
            raise DomainError("infinity type values must cover exactly the paired embeddings")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[int]], prefix: str = "tau") -> "InfinityType":
        labels = tuple((f"{prefix}{k}", f"{prefix}bar{k}") for k in range(1, len(pairs) + 1))
        values = {}
        for (a, b), (x, y) in zip(labels, pairs):
            values[a], values[b] = int(x), int(y)
        return cls(labels, values)

    @property
    def places(self) -> tuple[str, ...]:
        return tuple(f"sigma{k}" for k in range(1, len(self.pairs) + 1))

    def conjugate(self, tau: str) -> str:
        for a, b in self.pairs:
            if tau == a:
                return b
            if tau == b:
                return a
        raise KeyError(tau)

    def place_of(self, tau: str) -> int:
        for k, pair in enumerate(self.pairs):
            if tau in pair:
                return k
        raise KeyError(tau)

    def scaled(self, factor: int) -> "InfinityType":
        return InfinityType(self.pairs, {t: factor * v for t, v in self.values.items()})


@dataclass(frozen=True)
class HeckeCharacterData:
    name: str
    infinity: InfinityType
    weight: int
    restriction_finite_order: str = "trivial"
    coeff_field_label: str = "QCHI_TENSOR_K"

    def __post_init__(self):
        for a, b in self.infinity.pairs:
            if self.infinity.values[a] + self.infinity.values[b] != self.weight:
                raise DomainError(
                    f"{self.name}: n({a}) + n({b}) = {self.infinity.values[a] + self.infinity.values[b]}"
                    f" differs from the weight {self.weight}"
                )

    @classmethod
    def from_pairs(cls, name: str, pairs: Sequence[Sequence[int]], **kw) -> "HeckeCharacterData":
        eta = InfinityType.from_pairs(pairs)
        a, b = pairs[0]
        return cls(name, eta, int(a) + int(b), **kw)


@dataclass(frozen=True)
class CMTypeData:
    phi: tuple[str, ...]

    def validate(self, eta: InfinityType) -> None:
        chosen = set(self.phi)
        for a, b in eta.pairs:
            if (a in chosen) == (b in chosen):
                raise DomainError(f"CM type must contain exactly one of {a}, {b}")


def _eta(x) -> InfinityType:
    return x.infinity if isinstance(x, HeckeCharacterData) else x


def is_critical_character(chi) -> bool:
    eta = _eta(chi)
    return all(eta.values[a] != eta.values[b] for a, b in eta.pairs)


def cm_type_of(eta) -> CMTypeData:
    eta = _eta(eta)
    if not is_critical_character(eta):
        raise CriticalityError("infinity type has a pair with n_tau = n_taubar; the character is not critical")
    return CMTypeData(tuple(a if eta.values[a] > eta.values[b] else b for a, b in eta.pairs))


def chi_from_psi(psi: HeckeCharacterData) -> HeckeCharacterData:
    """Character of infinity type ``2 m_tau`` with trivial finite-order part."""
    if not is_critical_character(psi):
        raise CriticalityError(f"{psi.name} is not critical: some pair has m_tau = m_taubar")
    return HeckeCharacterData(
        name=f"chi[{psi.name}]",
        infinity=psi.infinity.scaled(2),
        weight=2 * psi.weight,
        restriction_finite_order="trivial",
        coeff_field_label=psi.coeff_field_label,
    )


def _pair_at(eta: InfinityType, sigma) -> tuple[str, str]:
    if isinstance(sigma, int):
        return eta.pairs[sigma]
    return eta.pairs[eta.places.index(sigma)]


def rm_hodge_types(chi, sigma=0) -> tuple[int, int, int]:
    """``(p1, p2, t)`` with ``p1 > p2`` the two infinity components at sigma."""
    eta = _eta(chi)
    a, b = _pair_at(eta, sigma)
    x, y = eta.values[a], eta.values[b]
    if x == y:
        raise CriticalityError(f"n({a}) = n({b}) = {x}: no critical Hodge splitting")
    p1, p2 = max(x, y), min(x, y)
    return p1, p2, p1 - p2


def e_sign(chi, tau: str) -> int:
    eta = _eta(chi)
    bar = eta.conjugate(tau)
    if eta.values[tau] == eta.values[bar]:
        raise CriticalityError(f"n({tau}) = n({bar})")
    return 1 if eta.values[tau] > eta.values[bar] else -1


def e_symbol(tau: str) -> str:
    return f"eTau({tau})"


def rm_period_axioms(sigma: str, wchi: int, delta: str, tau: str, chi: str = "chi") -> list[Axiom]:
    """Relations among c+-_sigma(chi), a+-_sigma(chi) and Q_sigma(chi) at one place.

    ``delta`` names the symbol standing for delta_sigma[chi0 epsL].
    """
    e_tau = sym(e_symbol(tau))
    d = sym(delta)
    c_plus, c_minus = sym(f"cPM({chi},{sigma},+)"), sym(f"cPM({chi},{sigma},-)")
    a_plus, a_minus = sym(f"aPM({chi},{sigma},+)"), sym(f"aPM({chi},{sigma},-)")
    two_pi_i = sym("TwoPiI")
    return [
        Axiom(
            f"quadratic_period_chi[{sigma}]",
            prod(sym(f"QChi({sigma})"), two_pi_i ** -wchi, d ** 2, e_tau ** -1, c_plus ** -2),
            "QCHI_TENSOR_K",
            "Q_sigma(chi) ~ (2 pi i)^w(chi) delta[chi0 epsL]^-2 e_tau c+_sigma(chi)^2",
        ),
        Axiom(
            f"c_from_a[{sigma},+]",
            prod(c_plus, two_pi_i ** wchi, d ** -1, a_minus ** -1),
            "QCHI_TENSOR_K",
            "c+-_sigma(chi) ~ (2 pi i)^-w(chi) delta[chi0 epsL] a-+_sigma(chi)",
        ),
        Axiom(
            f"c_from_a[{sigma},-]",
            prod(c_minus, two_pi_i ** wchi, d ** -1, a_plus ** -1),
            "QCHI_TENSOR_K",
            "c+-_sigma(chi) ~ (2 pi i)^-w(chi) delta[chi0 epsL] a-+_sigma(chi)",
        ),
        Axiom(
            f"a_sign[{sigma}]",
            prod(a_minus, e_tau ** -1, a_plus ** -1),
            "QCHI_TENSOR_K",
            "a-_sigma(chi) ~ e_tau a+_sigma(chi)",
        ),
        Axiom(
            f"c_sign[{sigma}]",
            prod(c_minus, e_tau ** -1, c_plus ** -1),
            "QCHI_TENSOR_K",
            "c-_sigma(chi) ~ e_tau c+_sigma(chi)",
        ),
    ]


def cm_axioms(chi: HeckeCharacterData, psi: HeckeCharacterData, shape: CompactShape) -> list[Axiom]:
    """CM-period relations for ``chi = chi_from_psi(psi)``, place by place."""
    expected = chi_from_psi(psi)
    if expected.infinity.values != chi.infinity.values or expected.weight != chi.weight:
        raise DomainError(f"{chi.name} is not the character attached to {psi.name}")
    eta = chi.infinity
    if shape.e != len(eta.pairs):
        raise DomainError(f"shape has {shape.e} places but the CM field has {len(eta.pairs)}")
    phi = cm_type_of(eta).phi
    wchi = chi.weight
    out: list[Axiom] = []
    for k, sigma in enumerate(eta.places):
        tau = phi[k]
        delta = f"DeltaEpsL({sigma})"
        out.append(
            Axiom(
                f"blasius[{sigma}]",
                sym(f"cPM(chi,{sigma},+)") / sym(f"CM(chicheck,{tau})"),
                "QCHI_TENSOR_K",
                "Blasius formula: c+_sigma(chi) ~ p(chi-check; tau), tau in Phi_chi",
                "assumption",
            )
        )
        out += rm_period_axioms(sigma, wchi, delta, tau)
        out.append(Axiom(f"delta_epsL_in_Lgal[{sigma}]", sym(delta), "L_GALOIS", "delta_sigma[epsL] lies in L'"))
    psi_phi = cm_type_of(psi).phi
    factors = [sym(f"CM(psi[{r},{s}],{tau})") for (r, s), tau in zip(shape.places, psi_phi)]
    out.append(
        Axiom(
            "cm_det_factorization",
            sym("CM(psi,det)") / prod(*factors),
            "E_PSI_E",
            "p(psi; det x) ~ prod_tau p(psi^r_tau (psi^iota)^s_tau; tau)",
        )
    )
    signature_gap = sum(r - s for r, s in shape.places)
    chicheck = prod(*(sym(f"CM(chicheck,{tau})", r - s) for (r, s), tau in zip(shape.places, phi)))
    out.append(
        Axiom(
            "cm_det_pair",
            prod(sym("CM(psi,det)"), sym("CM(psiinv,detbar)"), sym("TwoPiI", -psi.weight * signature_gap), chicheck ** -1),
            "E_PSI_E",
            "p(psi; det x) p(psi^-1; det xbar) ~ (2 pi i)^(w sum(r_tau - s_tau)) prod p(chi-check; tau)^(r_tau - s_tau)",
        )
    )
    return out
