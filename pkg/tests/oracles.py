"""Independent reference computations used across the test suite."""
from __future__ import annotations

from itertools import permutations, product

import sympy

from period_ledger.symlaurent import LaurentPoly


def to_sympy(poly: LaurentPoly, cache: dict[str, sympy.Symbol] | None = None) -> sympy.Expr:
    cache = {} if cache is None else cache
    out = sympy.Integer(0)
    for key, coeff in poly.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for i, e in key:
            name = poly.table.name(i)
            s = cache.setdefault(name, sympy.Symbol(name))
            term *= s ** e
        out += term
    return out


def sympy_det(matrix, cache=None) -> sympy.Expr:
    cache = {} if cache is None else cache
    if not matrix:
        return sympy.Integer(1)
    m = sympy.Matrix([[to_sympy(x, cache) for x in row] for row in matrix])
    return sympy.expand(m.det(method="berkowitz"))


def brute_force_W1(n: int, r: int) -> set[tuple[int, ...]]:
    """Permutations w of 1..n whose inverse is increasing on 1..r and on r+1..n."""
    out = set()
    for perm in permutations(range(1, n + 1)):
        inv = [0] * n
        for i, v in enumerate(perm, 1):
            inv[v - 1] = i
        if all(a < b for a, b in zip(inv[:r], inv[1:r])) and all(a < b for a, b in zip(inv[r:], inv[r + 1:])):
            out.add(perm)
    return out


def inversions(perm) -> int:
    return sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])


def small_lattice_member(target: dict[str, int], relations: list[dict[str, int]], bound: int = 3) -> bool:
    """Search integer combinations with coefficients in [-bound, bound]."""
    names = sorted(set(target).union(*relations)) if relations else sorted(target)
    tvec = [target.get(n, 0) for n in names]
    rvecs = [[r.get(n, 0) for n in names] for r in relations]
    for coeffs in product(range(-bound, bound + 1), repeat=len(rvecs)):
        if [sum(c * v[i] for c, v in zip(coeffs, rvecs)) for i in range(len(names))] == tvec:
            return True
    return False


def gamma_poles_critical(tensor_types, lo: int = -60, hi: int = 60) -> list[int]:
    """Critical integers straight from the Gamma factors of M and its dual.

    Each pair {p, q} with p < q contributes Gamma_C(s - p) to L_inf(M, s);
    the dual has types (-p, -q), contributing Gamma_C(s + q) with q > p,
    evaluated at 1 - s.  Gamma_C(z) has poles exactly at z in {0, -1, ...}.
    """
    out = []
    for m in range(lo, hi + 1):
        bad = False
        for p, q in tensor_types:
            low = min(p, q)
            high = max(p, q)
            if m - low <= 0:
                bad = True
            if (1 - m) + high <= 0:
                bad = True
        if not bad:
            out.append(m)
    return out
