"""Command line front end: ``period-ledger {critical,verify,weyl}``.

Exit status is 0 when every verdict passes, 1 when some verification fails
and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Any, Sequence

import jsonschema

from . import proof_engine as pe
from .critical_values import (
    admissible_m_range,
    assign_signatures,
    critical_set,
    critical_set_oracle,
    gamma_factor,
    profile_from_gl_weights,
)
from .hodge_periods import admissible_signatures
from .hecke_cm import CriticalityError, HeckeCharacterData, chi_from_psi, rm_hodge_types
from .symlaurent import DomainError
from .weights import (
    CompactShape,
    WeightVector,
    dot_action,
    enumerate_W1,
    hodge_decomposition_indices,
    is_dominant,
    lambda_flat,
)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
SEED_ENV = "PERIOD_LEDGER_SEED"


class InputError(Exception):
    pass


# ---------------------------------------------------------------- scenarios


@dataclass(frozen=True)
class Scenario:
    n: int
    e: int
    weights: WeightVector
    psi: HeckeCharacterData
    shape: CompactShape | None
    options: dict


def _schema() -> dict:
    return json.loads(resources.files(__package__).joinpath("scenario.schema.json").read_text())


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    validator = jsonschema.Draft202012Validator(_schema())
    errors = sorted(validator.iter_errors(raw), key=lambda err: list(err.absolute_path))
    if errors:
        lines = [f"{source}: field '{'/'.join(map(str, err.absolute_path)) or '<root>'}': {err.message}" for err in errors]
        raise InputError("\n".join(lines))
    n, e = raw["n"], raw["e"]
    rows = raw["weights"]
    if len(rows) != e:
        raise InputError(f"{source}: field 'weights': expected {e} rows (one per place), got {len(rows)}")
    for k, row in enumerate(rows):
        if len(row) != n:
            raise InputError(f"{source}: field 'weights/{k}': expected {n} entries, got {len(row)}")
        if any(x < y for x, y in zip(row, row[1:])):
            raise InputError(f"{source}: field 'weights/{k}': row {row} is not weakly decreasing")
    spec = raw["psi"]
    pairs = spec["pairs"]
    if len(pairs) != e:
        raise InputError(f"{source}: field 'psi/pairs': expected {e} pairs, got {len(pairs)}")
    sums = {a + b for a, b in pairs}
    if len(sums) != 1:
        raise InputError(f"{source}: field 'psi/pairs': m_tau + m_taubar must be the same at every place, got {sorted(sums)}")
    if "weight" in spec and spec["weight"] != next(iter(sums)):
        raise InputError(f"{source}: field 'psi/weight': {spec['weight']} disagrees with the pairs ({next(iter(sums))})")
    for k, (a, b) in enumerate(pairs):
        if a == b:
            raise InputError(
                f"{source}: field 'psi/pairs/{k}': m_tau = m_taubar = {a}, so psi is not critical"
                " (a critical character needs m_tau != m_taubar at every place)"
            )
    psi = HeckeCharacterData.from_pairs(spec.get("name", "psi"), pairs)
    shape = None
    if "shape" in raw:
        places = raw["shape"]
        if len(places) != e or any(r + s != n for r, s in places):
            raise InputError(f"{source}: field 'shape': need {e} pairs (r, s) with r + s = {n}")
        shape = CompactShape(tuple(tuple(p) for p in places))
    weights = WeightVector.of(rows, raw.get("a0", 0))
    return Scenario(n, e, weights, psi, shape, dict(raw.get("options", {})))


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return parse_scenario(text, path)


# ---------------------------------------------------------------- critical


def critical_report(sc: Scenario) -> dict[str, Any]:
    chi = chi_from_psi(sc.psi)
    profile = profile_from_gl_weights(sc.weights.rows, sc.n)
    places = []
    for key in profile.keys():
        p1, p2, t = rm_hodge_types(chi, key[0])
        bounds = [profile.w - 2 * p for p in profile.p[key]]
        places.append({"place": key[0], "p": list(profile.p[key]), "chi_types": [p1, p2], "t": t, "w_minus_2p": bounds})
    try:
        assignment = assign_signatures(profile, chi)
    except CriticalityError as exc:
        raise InputError(f"M x RM(chi) has no critical values: {exc}") from None
    for entry, key in zip(places, profile.keys()):
        entry["r"] = assignment.r[key]
        entry["s"] = assignment.s(key)
    derived = CompactShape(tuple((assignment.r[k], assignment.s(k)) for k in profile.keys()))
    if sc.shape is not None and sc.shape != derived:
        raise InputError(f"field 'shape': {list(map(list, sc.shape.places))} disagrees with the signatures forced by psi"
                         f" {list(map(list, derived.places))}")
    rng = critical_set(profile, chi, assignment)
    oracle = critical_set_oracle(profile, chi, assignment)
    w = sc.psi.weight
    motivic = rng.shifted(-w)
    adm = admissible_m_range(sc.weights, sc.psi.infinity, derived)
    self_dual = sc.weights.a0 == 0 and all(row == tuple(-x for x in reversed(row)) for row in sc.weights.rows)
    notes = []
    if any(s == 0 for _, s in derived.places):
        notes.append("definite signature at " + ", ".join(e["place"] for e in places if e["s"] == 0))
    if rng.empty:
        notes.append("no critical integers")
    out: dict[str, Any] = {
        "n": sc.n,
        "e": sc.e,
        "weight": profile.w,
        "psi_weight": w,
        "places": places,
        "shape": [list(p) for p in derived.places],
        "upsilon1": rng.upsilon1,
        "upsilon2": rng.upsilon2,
        "critical_set": list(rng.values()),
        "oracle_agrees": oracle is not None and oracle.values() == rng.values(),
        "motivic_critical_set": list(motivic.values()),
        "gamma_shifts": gamma_factor(profile, chi, assignment),
        "admissible_m": list(adm.values()),
        "theorem_grade_m": list(adm.theorem_values()),
        "notes": notes,
    }
    if self_dual:
        out["upper_bound_matches_upsilon2_minus_w"] = adm.upper == rng.upsilon2 - w
    return out


def _fmt_set(values: Sequence[int]) -> str:
    return "{" + ", ".join(map(str, values)) + "}"


def render_critical(rep: dict[str, Any]) -> str:
    lines = [f"n = {rep['n']}, e = {rep['e']}, weight w = {rep['weight']}, psi weight = {rep['psi_weight']}"]
    for p in rep["places"]:
        lines.append(
            f"{p['place']}: p = {tuple(p['p'])}, chi types = {tuple(p['chi_types'])}, t = {p['t']},"
            f" w - 2p_i = {tuple(p['w_minus_2p'])}, r = {p['r']}, s = {p['s']}"
        )
    lines.append(f"upsilon1 = {rep['upsilon1']}, upsilon2 = {rep['upsilon2']}")
    lines.append(f"critical set of M x RM(chi): {_fmt_set(rep['critical_set'])}"
                 f" (Gamma-pole scan {'agrees' if rep['oracle_agrees'] else 'DISAGREES'})")
    lines.append(f"critical m for L(s, pi x psi): {_fmt_set(rep['motivic_critical_set'])}")
    lines.append("Gamma shifts k in prod Gamma_C(s - k): " + str(rep["gamma_shifts"]))
    lines.append(f"admissible m: {_fmt_set(rep['admissible_m'])}; with m > n: {_fmt_set(rep['theorem_grade_m'])}")
    if "upper_bound_matches_upsilon2_minus_w" in rep:
        flag = "holds" if rep["upper_bound_matches_upsilon2_minus_w"] else "FAILS"
        lines.append(f"upper admissible bound = upsilon2 - w: {flag}")
    lines += [f"note: {n}" for n in rep["notes"]]
    return "\n".join(lines) + "\n"


def cmd_critical(args) -> int:
    rep = critical_report(load_scenario(args.scenario))
    _emit(json.dumps(rep, indent=2, sort_keys=True) + "\n" if args.json else render_critical(rep))
    ok = rep["oracle_agrees"] and rep.get("upper_bound_matches_upsilon2_minus_w", True)
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------- verify


def _shape_arg(text: str | None) -> CompactShape | None:
    if not text:
        return None
    try:
        return CompactShape(tuple(tuple(int(x) for x in part.split(",")) for part in text.split(";")))
    except ValueError:
        raise InputError(f"--shape expects 'r,s;r,s;...', got {text!r}") from None


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _tasks(args) -> list[tuple[str, dict]]:
    kind = args.kind
    if kind == "duality":
        dmax = args.dmax or 8
        ds = [args.d] if args.d else range(1, dmax + 1)
        return [("duality", {"d": d, "r": r, "s": d - r}) for d in ds for r in range(0, d + 1) if r < d - r]
    if kind == "cplusminus":
        rows = pe.sweep_cplus_cminus(args.dmax or 5)
        if args.d:
            rows = [t for t in pe.sweep_cplus_cminus(args.d) if t[0] == args.d]
        return [("cplusminus", {"d": d, "d_plus": dp, "epsilon": eps, "A_trivial": a}) for d, dp, eps, a in rows]
    if kind == "thmfact":
        if args.d and args.r is not None:
            if not args.d // 2 < args.r <= args.d:
                raise InputError(f"thmfact needs floor(d/2) < r <= d; got d={args.d}, r={args.r} (use r > {args.d // 2})")
            dps = sorted({dp for dp, _ in admissible_signatures(args.d)}, reverse=True)
            return [("thmfact", {"d": args.d, "d_plus": dp, "r": args.r}) for dp in dps]
        rows = pe.sweep_thmfact(args.d or args.dmax or 4)
        if args.d:
            rows = [t for t in rows if t[0] == args.d]
        return [("thmfact", {"d": d, "d_plus": dp, "r": r}) for d, dp, r in rows]
    if kind == "boundary":
        ns = [args.n] if args.n else range(1, 7)
        return [("boundary", {"n": n, "e": args.e or 1}) for n in ns]
    # maintheorem, prediction and tate share the tuple generator
    if args.m is not None:
        if not (args.n and args.e):
            raise InputError("--m needs --n and --e")
        shape = _shape_arg(args.shape) or CompactShape.uniform(args.n, 0, args.e)
        if shape.n != args.n or shape.e != args.e:
            raise InputError(f"--shape does not match n={args.n}, e={args.e}")
        params = {"n": args.n, "e": args.e, "m": args.m, "shape": [list(p) for p in shape.places]}
        if kind == "prediction":
            params.update(w=args.w if args.w is not None else 1, deligne=not args.no_deligne)
        if kind == "maintheorem":
            params.update(xi=args.xi, variant=args.variant)
        return [(kind, params)]
    rng = random.Random(_seed(args))
    out = []
    for _ in range(args.count):
        t = pe.random_theorem_grade_tuple(rng, n=args.n, e=args.e)
        params = t.as_dict()
        if kind == "maintheorem":
            params.update(xi=args.xi, variant=args.variant)
        if kind == "prediction":
            params["deligne"] = not args.no_deligne
        out.append((kind, params))
    return out


def run_task(task: tuple[str, dict], timing: bool = False) -> dict:
    kind, p = task
    if kind == "duality":
        rep = pe.verify_duality_lemma(p["d"], p["r"], p["s"])
    elif kind == "cplusminus":
        rep = pe.verify_cplus_cminus(p["d"], p["d_plus"], p["epsilon"], p["A_trivial"])
    elif kind == "thmfact":
        rep = pe.verify_thmfact(p["d"], p["d_plus"], p["r"])
    elif kind == "boundary":
        rep = pe.derive_boundary_unit(p["n"], p["e"])
    else:
        shape = CompactShape(tuple(tuple(x) for x in p["shape"]))
        weights = WeightVector.of(p["weights"]) if "weights" in p else None
        psi = HeckeCharacterData.from_pairs("psi", p["psi"]) if "psi" in p else None
        if kind == "maintheorem":
            xi = p["xi"] if p["xi"] is not None else 0
            rep = pe.derive_maintheorem(p["n"], p["e"], p["m"], xi, shape, p["variant"], weights, psi)
        elif kind == "prediction":
            rep = pe.derive_prediction(p["n"], p["e"], p["w"], p["m"], shape, p["deligne"], weights, psi)
        else:
            rep = pe.check_tate_equivalence(p["n"], p["e"], shape)
    out = rep.as_dict(timing)
    if kind == "maintheorem":
        out["negative_controls"] = _controls(rep)
    return out


def _controls(rep: pe.Report) -> dict[str, str]:
    derivation = rep.derivation
    results = {"drop holomorphic_antiholomorphic": derivation.without("holomorphic_antiholomorphic").check()}
    bumped = derivation.retarget(derivation.target * pe.PeriodExpr({"DiscKHalf": 1}))
    results["DiscKHalf exponent + 1"] = bumped.check()
    return {k: ("fails as expected" if not v.member else "UNEXPECTEDLY PASSES") for k, v in results.items()}


def _run_all(tasks: list[tuple[str, dict]], jobs: int, timing: bool) -> list[dict]:
    if jobs <= 1 or len(tasks) < 2:
        return [run_task(t, timing) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so the merge is deterministic
        return list(pool.map(run_task, tasks, [timing] * len(tasks)))


def render_records(records: list[dict]) -> str:
    lines = []
    for rec in records:
        params = ", ".join(f"{k}={_short(v)}" for k, v in rec["parameters"].items() if v is not None)
        lines.append(f"{rec['verdict'].upper():4} {rec['claim_id']} ({params})")
        lines.append(f"     claim: {rec['anchor']}")
        for step in rec["steps"]:
            if not step["passed"]:
                lines.append(f"     failed step: {step['name']}: {step['detail']}")
        cert = rec["certificate"]
        if cert and cert["member"]:
            lines.append("     certificate: " + ", ".join(f"{k}^{v}" for k, v in cert["certificate"].items()))
        elif cert:
            lines.append(f"     residual: {cert['residual']}")
        for name, outcome in rec.get("negative_controls", {}).items():
            lines.append(f"     control [{name}]: {outcome}")
        if "wall_time" in rec:
            lines.append(f"     wall time: {rec['wall_time']:.4f} s")
    passed = sum(r["verdict"] == "pass" for r in records)
    lines.append(f"{passed}/{len(records)} passed")
    return "\n".join(lines) + "\n"


def _short(v) -> str:
    return json.dumps(v, separators=(",", ":")) if isinstance(v, (list, dict)) else str(v)


def _controls_ok(rec: dict) -> bool:
    return all(v == "fails as expected" for v in rec.get("negative_controls", {}).values())


def cmd_verify(args) -> int:
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    if args.count < 1:
        raise InputError("--count must be at least 1")
    tasks = _tasks(args)
    if not tasks:
        raise InputError("no parameter tuples in the requested range")
    records = _run_all(tasks, args.jobs, args.timing)
    if args.json:
        _emit(json.dumps(records, indent=2, sort_keys=True) + "\n")
    else:
        _emit(render_records(records))
    ok = all(r["verdict"] == "pass" and _controls_ok(r) for r in records)
    return EXIT_PASS if ok else EXIT_FAIL


# ---------------------------------------------------------------- weyl


def _rows_arg(text: str, flag: str) -> list[list[int]]:
    try:
        return [[int(x) for x in part.split(",")] for part in text.split(";")]
    except ValueError:
        raise InputError(f"{flag} expects comma-separated integers with ';' between places, got {text!r}") from None


def weyl_report(shape: CompactShape, mu: WeightVector, degree: int | None = None) -> dict[str, Any]:
    if len(mu.rows) != shape.e or any(len(r) != shape.n for r in mu.rows):
        raise InputError(f"--mu needs {shape.e} rows of length {shape.n}")
    if not is_dominant(mu, shape):
        raise InputError(f"mu = {mu} is not dominant: every row must be weakly decreasing")
    deg = shape.d if degree is None else degree
    indices = {idx.element: idx for idx in hodge_decomposition_indices(mu, shape, deg)}
    rows = []
    for w in enumerate_W1(shape):
        moved = dot_action(w, mu, shape)
        flat = lambda_flat(moved, shape)
        idx = indices[w]
        rows.append(
            {
                "w": [list(p) for p in w.perms],
                "length": idx.length,
                "w_dot_mu": [list(r) for r in moved.rows],
                "lambda_flat": {"rows": [list(r) for r in flat.rows], "a0": flat.a0},
                "p": idx.p,
                "q": idx.q,
            }
        )
    return {"shape": [list(p) for p in shape.places], "mu": [list(r) for r in mu.rows], "a0": mu.a0,
            "degree": deg, "components": rows}


def render_weyl(rep: dict[str, Any]) -> str:
    lines = [f"shape {rep['shape']}, mu = {rep['mu']}; a0 = {rep['a0']}, degree {rep['degree']}",
             f"{len(rep['components'])} component(s)"]
    for c in rep["components"]:
        lines.append(
            f"w = {c['w']}  length {c['length']}  w*mu = {c['w_dot_mu']}"
            f"  lambda_flat = {c['lambda_flat']['rows']}; {c['lambda_flat']['a0']}  (p, q) = ({c['p']}, {c['q']})"
        )
    return "\n".join(lines) + "\n"


def cmd_weyl(args) -> int:
    try:
        shape = CompactShape(tuple(tuple(r) for r in _rows_arg(args.shape, "--shape")))
    except DomainError as exc:
        raise InputError(f"--shape: {exc}") from None
    mu = WeightVector.of(_rows_arg(args.mu, "--mu"), args.a0)
    rep = weyl_report(shape, mu, args.degree)
    _emit(json.dumps(rep, indent=2, sort_keys=True) + "\n" if args.json else render_weyl(rep))
    return EXIT_PASS


# ---------------------------------------------------------------- entry


def _emit(text: str) -> None:
    sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="period-ledger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    crit = sub.add_parser("critical", help="critical integers, signatures and admissible m of a scenario")
    crit.add_argument("scenario", help="scenario JSON file")
    crit.add_argument("--json", action="store_true")
    crit.set_defaults(func=cmd_critical)

    ver = sub.add_parser("verify", help="run period-factorization checks")
    ver.add_argument("kind", choices=["duality", "cplusminus", "thmfact", "maintheorem", "prediction", "boundary", "tate"])
    ver.add_argument("--dmax", type=int)
    ver.add_argument("--d", type=int)
    ver.add_argument("--r", type=int)
    ver.add_argument("--n", type=int)
    ver.add_argument("--e", type=int)
    ver.add_argument("--m", type=int)
    ver.add_argument("--w", type=int)
    ver.add_argument("--xi", type=int, default=None)
    ver.add_argument("--shape", help="signatures 'r,s;r,s' (with --m)")
    ver.add_argument("--variant", choices=["strict", "full-discriminant"], default="strict")
    ver.add_argument("--count", type=int, default=1, help="random Theorem-grade tuples to draw")
    ver.add_argument("--seed", type=int, help=f"defaults to ${SEED_ENV}, then 0")
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--timing", action="store_true", help="include wall time (makes output run-dependent)")
    ver.add_argument("--json", action="store_true")
    ver.add_argument("--no-deligne", action="store_true", help="withhold the period conjecture and show the residual")
    ver.set_defaults(func=cmd_verify)

    weyl = sub.add_parser("weyl", help="Weyl components and their Hodge types")
    weyl.add_argument("--shape", required=True, help="'r,s;r,s' per place")
    weyl.add_argument("--mu", required=True, help="'a1,...,an;...' per place")
    weyl.add_argument("--a0", type=int, default=0)
    weyl.add_argument("--degree", type=int)
    weyl.add_argument("--json", action="store_true")
    weyl.set_defaults(func=cmd_weyl)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
