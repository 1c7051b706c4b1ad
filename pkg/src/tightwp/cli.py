"""Command line interface: ``tightwp <command> ...`` (also ``python3 -m tightwp``).

Exit codes: 0 success, 1 failed identity check or failed computation,
2 usage error (including unstable (g, n)), 3 malformed input file.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import jsonschema

from . import __version__
from .cache import DiskCache, NullCache, canonical_json
from .ring import MPoly

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3
FORMATS = ("table", "json", "latex", "csv")

WEIGHT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "atoms": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["kind", "weight"],
                "properties": {
                    "kind": {"enum": ["geodesic", "cone", "cusp"]},
                    "length": {"type": ["number", "null"], "minimum": 0},
                    "angle": {"type": ["number", "null"], "exclusiveMinimum": 0,
                              "exclusiveMaximum": math.pi},
                    "weight": {"type": "number"},
                },
                "allOf": [
                    {"if": {"properties": {"kind": {"const": "geodesic"}}},
                     "then": {"required": ["length"], "properties": {"length": {"type": "number"}}}},
                    {"if": {"properties": {"kind": {"const": "cone"}}},
                     "then": {"required": ["angle"], "properties": {"angle": {"type": "number"}}}},
                ],
            },
        },
        "fzzt": {
            "oneOf": [
                {"type": "null"},
                {"type": "object", "additionalProperties": False, "required": ["s0", "z"],
                 "properties": {"s0": {"type": "number"},
                                "z": {"type": "number", "exclusiveMinimum": 0}}},
            ],
        },
        "mode": {
            "oneOf": [
                {"const": "numeric"},
                {"type": "object", "additionalProperties": False, "required": ["formal"],
                 "properties": {"formal": {"type": "integer", "minimum": 0, "maximum": 64}}},
            ],
        },
    },
}


class InputFileError(Exception):
    """Malformed weight file; ``problems`` is a list of (JSON pointer, message)."""

    def __init__(self, path, problems):
        self.path = path
        self.problems = problems
        super().__init__("; ".join(f"{p or '/'}: {m}" for p, m in problems))


def json_pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def load_weight_file(path):
    """Parse and validate a weight file; returns (Weight, mode)."""
    from .moments import FZZT, Atom, Weight
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputFileError(path, [("", f"cannot read file: {exc.strerror}")]) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFileError(path, [("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")]) from None
    validator = jsonschema.Draft202012Validator(WEIGHT_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise InputFileError(path, [(json_pointer(e.absolute_path), e.message) for e in errors])
    atoms = tuple(Atom(a["kind"], a["weight"], length=a.get("length"), angle=a.get("angle"))
                  for a in data.get("atoms", []))
    f = data.get("fzzt")
    fzzt = FZZT(f["s0"], f["z"]) if f else None
    return Weight(atoms, fzzt), data.get("mode", "numeric")


# rendering -----------------------------------------------------------------

def render_poly(poly: MPoly, fmt: str, meta: dict | None = None) -> str:
    if fmt == "latex":
        return poly.latex()
    if fmt == "json":
        return canonical_json({**(meta or {}), "text": str(poly), "terms": poly.to_json()})
    if fmt == "csv":
        names = sorted({s for s in poly.symbols()}, key=lambda s: s.id)
        rows = ["coeff" + "".join("," + s.name for s in names)]
        for exps, c in poly.terms():
            rows.append(str(c) + "".join(f",{exps.get(s, 0)}" for s in names))
        return "\n".join(rows)
    return str(poly)


def render_volume(payload: dict, fmt: str) -> str:
    from .volumes import VolumePoly
    v = VolumePoly.from_json(payload)
    return render_poly(v.poly, fmt, {"g": v.g, "n": v.n, "p": v.p, "basis": v.basis})


# cached computations -------------------------------------------------------

def _cached_volume(cache, kind, g, n, basis, p=None):
    from . import decomposition, nrecursion, volumes
    from .volumes import VolumePoly

    def compute():
        if kind == "V":
            return volumes.wp_volume(g, n).to_json()
        if kind == "P":
            return nrecursion.normalized_volume(g, n).to_json()
        if kind == "Tgnp":
            return decomposition.extract_tight(g, n, p).to_json()
        if kind == "Hp":
            return VolumePoly(0, 2, "wp", decomposition.half_tight_volume(p), p).to_json()
        if basis == "beta":
            return volumes.tight_volume(g, n).to_json()
        return nrecursion.tight_volume_nrec(g, n).to_json()
    return cache.fetch(cache.key(kind, g, n, p, basis), compute)


def _usage(msg):
    print(f"tightwp: error: {msg}", file=sys.stderr)
    return EXIT_USAGE


def _stable_or_usage(g, n, min_n=0):
    if g < 0 or n < min_n or 2 * g - 2 + n <= 0:
        return _usage(f"(g, n) = ({g}, {n}) is not stable: need 2g - 2 + n > 0"
                      + (f" and n >= {min_n}" if min_n else ""))
    return None


# commands ------------------------------------------------------------------

def cmd_volumes(args, cache):
    err = _stable_or_usage(args.g, args.n, 1 if args.basis == "beta" else 0)
    if err is not None:
        return err
    kind = "V" if args.basis == "wp" else "T"
    payload = _cached_volume(cache, kind, args.g, args.n, args.basis)
    print(render_volume(payload, args.format))
    return EXIT_OK


def cmd_tight(args, cache):
    from .volumes import VolumePoly
    if args.defects is not None and args.mu is not None:
        return _usage("--defects and --mu are mutually exclusive")
    if args.half_tight is not None:
        if args.half_tight < 1:
            return _usage("--half-tight needs P >= 1")
        payload = _cached_volume(cache, "Hp", 0, 2, "wp", args.half_tight)
        print(render_volume(payload, args.format))
        return EXIT_OK
    if args.g is None or args.n is None:
        return _usage("tight needs -g and -n (or --half-tight)")
    if args.defects is not None:
        err = _stable_or_usage(args.g, args.n, 1)
        if err is not None:
            return err
        if args.defects < 0:
            return _usage("--defects must be non-negative")
        payload = _cached_volume(cache, "Tgnp", args.g, args.n, "wp", args.defects)
        print(render_volume(payload, args.format))
        return EXIT_OK
    err = _stable_or_usage(args.g, args.n, 0 if args.basis == "moments" else 1)
    if err is not None:
        return err
    if args.mu is not None:
        return _tight_with_weight(args, cache)
    if args.basis == "beta":
        payload = _cached_volume(cache, "T", args.g, args.n, "beta")
        print(render_volume(payload, args.format))
        return EXIT_OK
    P = VolumePoly.from_json(_cached_volume(cache, "P", args.g, args.n, "m"))
    e = 2 * args.g - 2 + args.n
    meta = {"g": args.g, "n": args.n, "basis": "m", "prefactor": f"M0^-{e}", "prefactor_exponent": -e}
    if args.format == "table":
        print(f"M0^-{e} * ({P.poly})")
    elif args.format == "latex":
        den = "M_0" if e == 1 else f"M_0^{{{e}}}"
        print(f"\\frac{{1}}{{{den}}}\\left({P.poly.latex()}\\right)")
    else:
        print(render_poly(P.poly, args.format, meta))
    return EXIT_OK


def _tight_with_weight(args, cache):
    from .jt import length_coefficients
    from .moments import FormalMomentData, moments
    from .volumes import VolumePoly
    weight, mode = load_weight_file(args.mu)
    T = VolumePoly.from_json(_cached_volume(cache, "T", args.g, args.n, "moments"))
    data = moments(weight, max(3 * args.g - 3 + args.n, 1), mode)
    if isinstance(data, FormalMomentData):
        series = data.evaluate(T.poly)
        rows = [{"w": k, "coeff": c.to_json(), "text": str(c)} for k, c in enumerate(series.coeffs)]
        if args.format == "json":
            print(canonical_json({"g": args.g, "n": args.n, "order": data.order, "series": rows}))
        else:
            for r in rows:
                print(f"w^{r['w']}: {r['text']}")
        return EXIT_OK
    coeffs = length_coefficients(T.poly, args.n, data)
    rows = [{"k": list(k), "coeff": _num(c)} for k, c in sorted(coeffs.items())]
    if args.format == "json":
        print(canonical_json({"g": args.g, "n": args.n, "R": _num(data.R), "terms": rows}))
    else:
        for r in rows:
            mono = "*".join(f"L{i + 1}^{2 * k}" for i, k in enumerate(r["k"]) if k) or "1"
            print(f"{mono}: {r['coeff']}")
    return EXIT_OK


def _num(x) -> str:
    import mpmath
    return mpmath.nstr(x, 17, min_fixed=-4, max_fixed=8)


def cmd_check(args, cache):
    from .checks import run_suite
    results = run_suite(args.suite, args.max_complexity)
    ok = all(r["passed"] for r in results)
    report = {"suite": args.suite, "max_complexity": args.max_complexity, "passed": ok,
              "count": len(results), "failed": sum(not r["passed"] for r in results),
              "checks": results}
    print(json.dumps(report, indent=1, sort_keys=True))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_intersection(args, cache):
    from .nrecursion import psi_intersection
    d = sorted(args.d, reverse=True)
    if any(x < 0 for x in d):
        return _usage("insertions must be non-negative")
    payload = cache.fetch(cache.key("intersection", args.g, len(d), d, "-"),
                          lambda: {"g": args.g, "d": d, "value": str(psi_intersection(args.g, d))})
    print(canonical_json(payload) if args.format == "json" else payload["value"])
    return EXIT_OK


def cmd_moments(args, cache):
    from .moments import FormalMomentData, moments
    weight, mode = load_weight_file(args.mu)
    if args.formal is not None:
        mode = {"formal": args.formal}
    data = moments(weight, args.K, mode)
    if isinstance(data, FormalMomentData):
        out = {"order": data.order, "R": [str(c) for c in data.R.coeffs],
               "M": [[str(c) for c in s.coeffs] for s in data.M],
               "beta": [[str(c) for c in s.coeffs] for s in data.beta]}
    else:
        out = {"R": _num(data.R), "M": [_num(x) for x in data.M], "t": [_num(x) for x in data.t],
               "beta": [_num(x) for x in data.beta], "eta": [_num(x) for x in data.eta],
               "diagnostics": {"residual": _num(abs(data.residual)), "iterations": data.iterations}}
    if args.format == "json":
        print(canonical_json(out))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK


def cmd_jt(args, cache):
    from .jt import jt_partition
    from .moments import DPS, FZZT, Weight
    betas = args.beta
    if (args.g, args.n) != (0, 2):
        err = _stable_or_usage(args.g, args.n, 1)
        if err is not None:
            return err
    if len(betas) != args.n:
        return _usage(f"need {args.n} values for --beta, got {len(betas)}")
    if any(b <= 0 for b in betas):
        return _usage("--beta values must be positive")
    weight = Weight()
    if args.mu is not None:
        weight, mode = load_weight_file(args.mu)
        if mode != "numeric":
            raise InputFileError(args.mu, [("/mode", "JT partition functions need numeric mode")])
    if args.fzzt is not None:
        weight = Weight(weight.atoms, FZZT(*args.fzzt))
    res = jt_partition(args.g, args.n, betas, weight)
    out = {"value": _num(res.value), "prefactor_exponent": res.prefactor_exponent,
           "prefactor": f"exp(-S0*{res.prefactor_exponent})", "R": _num(res.R),
           "diagnostics": res.diagnostics}
    if args.s0 is not None:
        import mpmath
        with mpmath.workdps(DPS):
            out["with_prefactor"] = _num(res.value * mpmath.exp(-mpmath.mpf(args.s0) * res.prefactor_exponent))
    if args.format == "json":
        print(canonical_json(out))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK


# parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tightwp", description=__doc__.splitlines()[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter,
                                 epilog="Environment: WP_CACHE_DIR sets the on-disk cache directory.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--no-cache", action="store_true", help="neither read nor write the disk cache")
    sub = ap.add_subparsers(dest="command", required=True)

    def gn(p, required=True):
        p.add_argument("-g", type=int, required=required, help="genus")
        p.add_argument("-n", type=int, required=required, help="number of boundaries")

    p = sub.add_parser("volumes", help="Weil-Petersson or tight volume polynomials")
    gn(p)
    p.add_argument("--basis", choices=("wp", "moments", "beta"), default="wp",
                   help="wp: V_{g,n}; moments: T_{g,n} in M_k, 1/M_0; beta: T_{g,n} in beta_m")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_volumes)

    p = sub.add_parser("tight", help="tight volumes: normalized polynomial, defect tables, or at a weight")
    gn(p, required=False)
    p.add_argument("--defects", type=int, default=None, metavar="P",
                   help="print T_{g,n,P} (defect lengths L_{n+1}..L_{n+P}), pi^2 basis")
    p.add_argument("--basis", choices=("moments", "beta"), default="moments",
                   help="moments: M_0^{-(2g-2+n)} times the polynomial in m_k = M_k/M_0")
    p.add_argument("--half-tight", type=int, default=None, metavar="P",
                   help="print the half-tight cylinder H_P(L_1, L_2, L_3..L_{2+P})")
    p.add_argument("--mu", metavar="FILE", help="weight JSON file; evaluates T_{g,n}(L; mu]")
    p.add_argument("--format", choices=FORMATS, default="table")
    p.set_defaults(func=cmd_tight)

    p = sub.add_parser("check", help="run identity suites; JSON report, exit 1 on failure")
    from .checks import DEFAULT_COMPLEXITY, SUITES
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--max-complexity", type=int, default=DEFAULT_COMPLEXITY, metavar="C",
                   help="largest 2g - 2 + n (default %(default)s)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("intersection", help="psi-class intersection number <tau_d1 ... tau_dn>_g")
    p.add_argument("-g", type=int, required=True, help="genus")
    p.add_argument("-d", type=int, nargs="+", required=True, help="insertion indices")
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_intersection)

    p = sub.add_parser("moments", help="R, M_k, t_k, beta_m of a weight file")
    p.add_argument("--mu", metavar="FILE", required=True)
    p.add_argument("-K", type=int, default=10, help="highest moment index")
    p.add_argument("--formal", type=int, default=None, metavar="N",
                   help="formal series in w to order N (overrides the file's mode)")
    p.add_argument("--format", choices=("table", "json"), default="json")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("jt", help="JT partition function Z_{g,n}(beta) with defects",
                       description="Cone atoms use the angle alpha in (0, pi); a JT defect of "
                                   "angle 2 pi a is a cone atom with angle 2 pi a.")
    gn(p)
    p.add_argument("--beta", type=float, nargs="+", required=True, help="boundary lengths")
    p.add_argument("--mu", metavar="FILE")
    p.add_argument("--fzzt", type=float, nargs=2, metavar=("S0", "Z"),
                   help="add an FZZT brane with parameters s0, z")
    p.add_argument("--s0", type=float, default=None,
                   help="also report the value times exp(-S0 (2g + n - 2))")
    p.add_argument("--format", choices=("table", "json"), default="json")
    p.set_defaults(func=cmd_jt)
    return ap


def main(argv=None) -> int:
    from .moments import ConvergenceError
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    cache = NullCache() if args.no_cache else DiskCache()
    try:
        return args.func(args, cache)
    except InputFileError as exc:
        for ptr, msg in exc.problems:
            print(f"{exc.path}: {ptr or '/'}: {msg}", file=sys.stderr)
        return EXIT_INPUT
    except ConvergenceError as exc:
        print(f"tightwp: {exc} {json.dumps(exc.diagnostics)}", file=sys.stderr)
        return EXIT_CHECK
    except ValueError as exc:
        return _usage(str(exc))


if __name__ == "__main__":
    sys.exit(main())
