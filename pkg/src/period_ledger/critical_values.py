"""Critical integers of M (x) RM(chi) from Hodge data.

Conventions: Gamma_C(s) = 2 (2 pi)^-s Gamma(s), whose poles are the
non-positive integers, so a factor Gamma_C(s - k) has poles at s <= k.
Critical sets are half-open integer intervals (upsilon1, upsilon2].
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .hecke_cm import CriticalityError, InfinityType, cm_type_of, rm_hodge_types
from .hodge_periods import HodgeProfile
from .symlaurent import DomainError
from .weights import CompactShape, WeightVector

Key = tuple[str, str]


class Sentinel(enum.Enum):
    POS_INF = "+inf"
    NEG_INF = "-inf"


def hodge_number(vec: Sequence[int], i: int) -> int | Sentinel:
    """p_i with p_0 = +inf and p_{d+1} = -inf."""
    if i <= 0:
        return Sentinel.POS_INF
    if i > len(vec):
        return Sentinel.NEG_INF
    return vec[i - 1]


def _shifted(value: int | Sentinel, k: int) -> int | Sentinel:
    return value if isinstance(value, Sentinel) else value + k


def _max(values) -> int:
    finite = [v for v in values if not isinstance(v, Sentinel)]
    if Sentinel.POS_INF in values or not finite:
        raise DomainError("upper critical bound is unbounded")
    return max(finite)


def _min(values) -> int:
    finite = [v for v in values if not isinstance(v, Sentinel)]
    if Sentinel.NEG_INF in values or not finite:
        raise DomainError("lower critical bound is unbounded")
    return min(finite)


@dataclass(frozen=True)
class CriticalRange:
    upsilon1: int
    upsilon2: int

    @property
    def empty(self) -> bool:
        return self.upsilon1 >= self.upsilon2

    def values(self) -> tuple[int, ...]:
        return tuple(range(self.upsilon1 + 1, self.upsilon2 + 1))

    def shifted(self, k: int) -> "CriticalRange":
        return CriticalRange(self.upsilon1 + k, self.upsilon2 + k)


@dataclass(frozen=True)
class SignatureAssignment:
    d: int
    r: Mapping[Key, int] = field(hash=False)

    def s(self, key: Key) -> int:
        return self.d - self.r[key]

    def shape(self) -> CompactShape:
        return CompactShape(tuple((self.r[k], self.d - self.r[k]) for k in sorted(self.r)))


@dataclass(frozen=True)
class TensorHodgeProfile:
    weight: int
    types: Mapping[Key, tuple[tuple[int, int, int], ...]] = field(hash=False)

    def has_middle_type(self) -> bool:
        return any(p == q for entries in self.types.values() for p, q, _ in entries)


def _place_index(key: Key) -> int:
    sigma = key[0]
    if not sigma.startswith("sigma"):
        raise DomainError(f"place label {sigma!r} must look like sigma<k>")
    return int(sigma[5:]) - 1


def _chi_types(chi, key: Key) -> tuple[int, int, int]:
    return rm_hodge_types(chi, _place_index(key))


def profile_from_gl_weights(a: Sequence[Sequence[int]], n: int) -> HodgeProfile:
    """p_i = a_i + n - i per place; weight n - 1."""
    rows = [tuple(int(x) for x in row) for row in a]
    for row in rows:
        if len(row) != n:
            raise DomainError(f"weight row {row} has length {len(row)}, expected {n}")
        if any(x < y for x, y in zip(row, row[1:])):
            raise DomainError(f"weight row {row} is not decreasing")
    return HodgeProfile.per_place([tuple(x + n - i for i, x in enumerate(row, 1)) for row in rows], n - 1)


def tensor_hodge_profile(profile: HodgeProfile, chi) -> TensorHodgeProfile:
    wchi = None
    types = {}
    for key in profile.keys():
        p1, p2, _ = _chi_types(chi, key)
        wchi = p1 + p2
        pairs = Counter()
        for p in profile.p[key]:
            q = profile.w - p
            pairs[(p + p1, q + p2)] += 1
            pairs[(p + p2, q + p1)] += 1
        types[key] = tuple(sorted(((p, q, m) for (p, q), m in pairs.items()), reverse=True))
    return TensorHodgeProfile(profile.w + wchi, types)


def has_critical_values(profile: HodgeProfile, chi) -> bool:
    for key in profile.keys():
        t = _chi_types(chi, key)[2]
        if any(t == profile.w - 2 * p for p in profile.p[key]):
            return False
    return True


def assign_signatures(profile: HodgeProfile, chi) -> SignatureAssignment:
    r = {}
    for key in profile.keys():
        t = _chi_types(chi, key)[2]
        bounds = [profile.w - 2 * p for p in profile.p[key]]
        if t in bounds:
            i = bounds.index(t) + 1
            raise CriticalityError(f"{key}: t = {t} equals w - 2 p_{i}; M (x) RM(chi) has no critical values")
        r[key] = sum(1 for b in bounds if b < t)
    return SignatureAssignment(profile.d, r)


def _require_polarized(profile: HodgeProfile) -> None:
    if not profile.is_polarized():
        raise DomainError("Hodge numbers must satisfy p_i + p_(d+1-i) = w at every place")


def critical_set(profile: HodgeProfile, chi, assignment: SignatureAssignment) -> CriticalRange:
    _require_polarized(profile)
    d = profile.d
    lows, highs = [], []
    for key in profile.keys():
        vec = profile.p[key]
        p1, p2, _ = _chi_types(chi, key)
        r = assignment.r[key]
        lows.append(_max([_shifted(hodge_number(vec, r + 1), p1), _shifted(hodge_number(vec, d + 1 - r), p2)]))
        highs.append(_min([_shifted(hodge_number(vec, r), p1), _shifted(hodge_number(vec, d - r), p2)]))
    return CriticalRange(max(lows), min(highs))


def gamma_factor(profile: HodgeProfile, chi, assignment: SignatureAssignment) -> list[int]:
    """Shifts k of the factors Gamma_C(s - k) of L_infinity(M (x) RM(chi), s)."""
    _require_polarized(profile)
    d = profile.d
    shifts = []
    for key in profile.keys():
        vec = profile.p[key]
        p1, p2, _ = _chi_types(chi, key)
        r = assignment.r[key]
        shifts += [vec[i - 1] + p1 for i in range(r + 1, d + 1)]
        shifts += [vec[i - 1] + p2 for i in range(d + 1 - r, d + 1)]
    return shifts


def critical_set_oracle(profile: HodgeProfile, chi, assignment: SignatureAssignment | None = None) -> CriticalRange | None:
    """Scan integers for poles of L_inf(M', s) and L_inf(M'^dual, 1 - s).

    Works from the tensor Hodge types alone.  Returns None when some type
    has p = q, since then the pole pattern depends on the Frobenius sign
    and not on Hodge numbers.
    """
    tensor = tensor_hodge_profile(profile, chi)
    if tensor.has_middle_type():
        return None
    shifts, dual_shifts = [], []
    for entries in tensor.types.values():
        for p, q, _ in entries:
            if p < q:
                shifts.append(p)
            if -p < -q:
                dual_shifts.append(-p)
    values = [v for e in tensor.types.values() for p, q, _ in e for v in (p, q)]
    lo, hi = min(values) - 2, max(values) + 2
    critical = [
        m
        for m in range(lo, hi + 1)
        if not any(m <= k for k in shifts) and not any(1 - m <= k for k in dual_shifts)
    ]
    if not critical:
        return CriticalRange(0, 0)
    if critical != list(range(critical[0], critical[-1] + 1)):
        raise AssertionError(f"critical integers {critical} are not an interval")
    return CriticalRange(critical[0] - 1, critical[-1])


@dataclass(frozen=True)
class AdmissibleRange:
    lower: int
    upper: int
    n: int

    def values(self) -> tuple[int, ...]:
        return tuple(range(self.lower, self.upper + 1))

    def theorem_values(self) -> tuple[int, ...]:
        return tuple(m for m in self.values() if m > self.n)


def admissible_m_range(mu: WeightVector, eta: InfinityType, shape: CompactShape) -> AdmissibleRange:
    """n/2 <= m <= min over tau in Phi of the two bounds of the twisted
    doubling range; a_{tau,0} = +inf and a_{tau,n+1} = -inf."""
    n = shape.n
    if len(mu.rows) != shape.e or len(eta.pairs) != shape.e:
        raise DomainError("weight, character and shape disagree on the number of places")
    phi = cm_type_of(eta).phi
    bounds = []
    for row, (r, s), tau in zip(mu.rows, shape.places, phi):
        gap = eta.values[tau] - eta.values[eta.conjugate(tau)]
        if s < n:
            bounds.append(-row[s] + s + gap)
        if s > 0:
            bounds.append(row[s - 1] + r - gap)
    return AdmissibleRange(-(-n // 2), min(bounds), n)
