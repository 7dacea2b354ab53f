"""Command-line batch runner: wallach, invariance, subspaces, norms.

Exit codes: 0 all checks pass, 1 a mathematical check failed, 2 bad
configuration (including budget limits).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Sequence

from .cayley import conjugated_action_check
from .convention import DEFAULT
from .errors import SiegelError
from .geometry import MAX_N, point_to_json
from .intertwine import (ALTERNATE_DISPLAY, alternate_display_value, check_inversion_intertwine,
                         derivative_kernel_coefficient, gamma_closed_form)
from .kernels import verify_kernel_invariance, wallach_passed, wallach_scan
from .norms import (BallPullback, ball_norm_As, ball_seminorm_tilde, bergman_quadrature_norm,
                    halfspace_seminorm_Ask)
from .polynomials import BallPolynomial, multi_indices
from .rng import SplitMix64, derive_seed
from .sampling import random_ball_point, random_siegel_point, random_word
from .subspaces import (brute_force_orbit_span, enumerate_invariant_truncations,
                        member_set, orbit_descriptor, span_matches_descriptor)

DEFAULT_GRID = (-1.0, -0.5, 0.0, 0.5, 1.0, 2.0)


class ConfigError(SiegelError, ValueError):
    """Invalid command-line configuration."""


# ------------------------------------------------------------ formatting


def fmt_float(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return "%.17g" % x


_MARK = re.compile(r'"@@F:([^@]*)@@"')


def _prepare(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return fmt_float(obj)
        return "@@F:" + fmt_float(obj) + "@@"
    if isinstance(obj, complex):
        return [_prepare(obj.real), _prepare(obj.imag)]
    if isinstance(obj, dict):
        return {str(k): _prepare(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_prepare(v) for v in obj]
    return _prepare(float(obj))


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, 17 significant digits, inf as "inf"."""
    text = json.dumps(_prepare(obj), sort_keys=True, indent=2)
    return _MARK.sub(lambda m: m.group(1), text) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_float(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_grid(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigError(f"malformed s grid {text!r}") from exc
    if not vals or any(math.isnan(v) or math.isinf(v) for v in vals):
        raise ConfigError(f"malformed s grid {text!r}")
    return vals


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_N:
        raise ConfigError(f"n must lie in [0, {MAX_N}]")


# ------------------------------------------------------------ commands


def cmd_wallach(args) -> int:
    _check_n(args.n)
    grid = parse_grid(args.s_grid) if args.s_grid else list(DEFAULT_GRID)
    entries = wallach_scan(args.n, grid, trials=args.trials, cloud_size=args.cloud_size, seed=args.seed)
    passed = wallach_passed(entries)
    rows = [(e.s, e.min_eig, "true" if e.psd else "false", e.witness_id) for e in entries]
    witnesses = {
        "command": "wallach",
        "config": {"n": args.n, "s_grid": grid, "seed": args.seed, "trials": args.trials,
                   "cloud_size": args.cloud_size},
        "passed": passed,
        "psd_semantics": "finite clouds certify non-PSD only; psd=true is evidence, not proof",
        "entries": [
            {"s": e.s, "min_eig": e.min_eig, "psd": e.psd, "witness_id": e.witness_id,
             "negative_witness": e.has_negative_witness,
             "witness": [point_to_json(p) for p in e.witness] if e.s < 0 else []}
            for e in entries
        ],
    }
    if args.format == "csv":
        _emit(_csv(("s", "min_eig", "psd", "witness_id"), rows), args.out)
        if args.out:
            _emit(dumps(witnesses), args.out + ".witnesses.json")
    else:
        _emit(dumps(witnesses), args.out)
    return 0 if passed else 1


def cmd_invariance(args) -> int:
    _check_n(args.n)
    s = 1.0 if args.s is None else args.s
    tol = args.tol if args.tol is not None else 1e-9
    conv = DEFAULT.perturbed(args.perturb_phase) if args.perturb_phase else DEFAULT
    rows, worst = [], 0.0
    for i in range(args.word_count):
        rng = SplitMix64(derive_seed(args.seed, args.n, i))
        w = random_word(rng, args.n)
        pairs = [(random_siegel_point(rng, args.n), random_siegel_point(rng, args.n)) for _ in range(4)]
        rep = verify_kernel_invariance(w, s, pairs, tol, convention=conv, conj_convention=DEFAULT)
        worst = max(worst, rep.max_error)
        rows.append({"word": i, "letters": len(w), "max_error": rep.max_error, "passed": rep.passed})
    conj = []
    f = lambda p: 1 + p.z ** 2 + 0.5 * sum(p.zeta)
    for i in range(min(5, args.word_count)):
        rng = SplitMix64(derive_seed(args.seed, args.n, 10 ** 6 + i))
        w = random_word(rng, args.n, max_letters=3)
        pts = [random_ball_point(rng, args.n, 0.8) for _ in range(6)]
        rep = conjugated_action_check(w, s, f, pts, tol=max(tol, 1e-9))
        conj.append({"word": i, "modulus_error": rep.max_modulus_error, "ratio_spread": rep.ratio_spread,
                     "passed": rep.passed})
    passed = worst <= tol and all(c["passed"] for c in conj)
    report = {"command": "invariance",
              "config": {"n": args.n, "s": s, "seed": args.seed, "tol": tol, "word_count": args.word_count,
                         "perturb_phase": args.perturb_phase},
              "max_error": worst, "passed": passed, "words": rows, "conjugation": conj}
    if args.format == "csv":
        _emit(_csv(("word", "letters", "max_error", "passed"),
                   [(r["word"], r["letters"], r["max_error"], str(r["passed"]).lower()) for r in rows]), args.out)
    else:
        _emit(dumps(report), args.out)
    return 0 if passed else 1


def cmd_subspaces(args) -> int:
    _check_n(args.n)
    D = 4 if args.degree_bound is None else args.degree_bound
    if D < 0:
        raise ConfigError("degree_bound must be >= 0")
    descs = enumerate_invariant_truncations(args.n, D)  # BudgetExceeded past the limit
    orbit_rows = []
    if args.n >= 1:
        bound = min(2 * D, 10)
        for k in range(D + 1):
            for h in range(D + 1 - k):
                d = orbit_descriptor(k, h)
                basis = brute_force_orbit_span(args.n, k, h, bound)
                orbit_rows.append({"k": k, "h": h, "descriptor": d.to_json(), "dim": len(basis),
                                   "expected_dim": len(member_set(args.n, d, bound)),
                                   "match": span_matches_descriptor(basis, args.n, d, bound)})
    passed = all(r["match"] for r in orbit_rows)
    if args.n == 0:
        passed = passed and [str(d) for d in descs] == [f"({h},...)" for h in range(D + 1)]
    report = {"command": "subspaces", "config": {"n": args.n, "degree_bound": D},
              "descriptors": [d.to_json() for d in descs], "orbits": orbit_rows, "passed": passed}
    if args.format == "csv":
        _emit(_csv(("descriptor", "head", "tail"),
                   [(str(d), " ".join(map(str, d.head)), d.tail) for d in descs]), args.out)
    else:
        _emit(dumps(report), args.out)
    return 0 if passed else 1


def _monomials(n: int, max_degree: int) -> list[BallPolynomial]:
    return [BallPolynomial.monomial(n, a) for d in range(max_degree + 1) for a in multi_indices(n + 1, d)]


def cmd_norms(args) -> int:
    _check_n(args.n)
    n = args.n
    s = 3.0 if args.s is None else args.s
    tol = args.tol if args.tol is not None else 1e-8
    rows, passed = [], True
    if s > n + 1:
        for f in _monomials(n, 6):
            a = ball_norm_As(f, s).value
            b = bergman_quadrature_norm(f, s).value
            err = abs(a - b) / a
            ok = err <= tol
            passed &= ok
            rows.append({"f": f.to_json(), "series": a, "quadrature": b, "rel_error": err, "passed": ok})
    elif s >= 0:
        for f in _monomials(n, 2):
            r = ball_norm_As(f, s)
            ok = (r.infinite == (s == 0 and f.degree() > 0))
            passed &= ok
            rows.append({"f": f.to_json(), "series": r.value, "passed": ok})
    if s <= 0 and s == int(s):
        si = int(s)
        ratios = []
        for f in _monomials(n, 3 - si):
            t = ball_seminorm_tilde(f, si).value
            null = f.degree() < 1 - si
            ok = (t == 0.0) == null
            row = {"f": f.to_json(), "tilde": t, "null": null, "passed": ok}
            if n == 0 and not null:
                hs = halfspace_seminorm_Ask(BallPullback(f, si), si, 1 - si).value
                row["halfspace"] = hs
                ratios.append(hs / t)
            passed &= ok
            rows.append(row)
        if ratios and max(ratios) - min(ratios) > tol * max(ratios):
            passed = False
        if n == 0:
            inv = check_inversion_intertwine(si, 6)
            passed &= inv.passed
            rows.append({"inversion": inv.to_json()})
    gam = []
    for k in range(1, 4):
        g = complex(derivative_kernel_coefficient(s, k))
        c = gamma_closed_form(s, k)
        ok = abs(g - c) <= 1e-12 * max(1.0, abs(c))
        passed &= ok
        gam.append({"k": k, "gamma": g.real, "closed_form": float(c), "passed": ok,
                    "alternate_display": ALTERNATE_DISPLAY, "alternate_value": alternate_display_value(s, k)})
    report = {"command": "norms", "config": {"n": n, "s": s, "tol": tol}, "checks": rows,
              "gamma": gam, "passed": bool(passed)}
    if args.format == "csv":
        _emit(_csv(("index", "value", "reference", "passed"),
                   [(i, r.get("series", r.get("tilde", float("nan"))), r.get("quadrature", r.get("halfspace", float("nan"))),
                     str(r.get("passed", True)).lower()) for i, r in enumerate(rows) if "inversion" not in r]),
              args.out)
    else:
        _emit(dumps(report), args.out)
    return 0 if passed else 1


# ------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siegel-rkhs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--n", type=int, default=0)
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--out", default=None)

    w = sub.add_parser("wallach", help="positivity scan of B^{-s} over seeded clouds")
    common(w)
    w.add_argument("--s-grid", default=None, help="comma separated, e.g. -1,-0.5,0,1")
    w.add_argument("--trials", type=int, default=200)
    w.add_argument("--cloud-size", type=int, default=12)
    w.set_defaults(func=cmd_wallach)

    v = sub.add_parser("invariance", help="kernel invariance over random group words")
    common(v)
    v.add_argument("--s", type=float, default=None)
    v.add_argument("--word-count", type=int, default=200)
    v.add_argument("--perturb-phase", type=float, default=0.0,
                   help="radians added to the inversion phase of the holomorphic factor only")
    v.set_defaults(func=cmd_invariance)

    su = sub.add_parser("subspaces", help="invariant subspace lattice and orbit spans")
    common(su)
    su.add_argument("--degree-bound", type=int, default=None)
    su.set_defaults(func=cmd_subspaces)

    no = sub.add_parser("norms", help="norm series, quadrature and seminorm checks")
    common(no)
    no.add_argument("--s", type=float, default=None)
    no.set_defaults(func=cmd_norms)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return 1
    except SiegelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
