"""Command-line interface.

Exit codes: 0 success, 1 input error, 2 no accepted solution, 3 rank failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction

from .adapters import Tensor3, dense_system, trilinear_max
from .assembly import DEFAULT_BUDGET, normalize_spec
from .errors import BasisBudgetExceeded, DimensionMismatch, MultiplicityWarning, NoAcceptedSolutions, RankDeficient
from .extractor import DEFAULT_EPSILON
from .lattice import convex_hull, mixed_volume
from .laurent import UNIFORM, LaurentPoly, random_generic, unit_simplex_support
from .pipeline import solve

EXIT_OK, EXIT_INPUT, EXIT_NONE, EXIT_RANK = 0, 1, 2, 3

BENCH_ROWS = ((1, 5, 7), (1, 5, 9), (1, 5, 11), (1, 7, 9), (1, 7, 11), (1, 9, 11), (1, 11, 11))

RANK_HINT = (
    "hint: the system may have infinitely many or repeated solutions; "
    "try another --seed for f0 or check the equations"
)


class InputError(ValueError):
    pass


def _read_json(args):
    try:
        if args.input and args.input != "-":
            with open(args.input) as fh:
                return json.load(fh)
        return json.load(sys.stdin)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON input: {exc}") from exc


def _write(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def parse_system(obj):
    """``(equations, f0 or None, extras)`` from a request object or bare list."""
    if isinstance(obj, list):
        obj = {"system": obj}
    if not isinstance(obj, dict) or "system" not in obj:
        raise InputError("input must be a list of equations or an object with a 'system' key")
    eqs = obj["system"]
    if not isinstance(eqs, list) or not eqs:
        raise InputError("the system must be a non-empty list of equations")
    polys = [LaurentPoly.from_json(t) for t in eqs]
    dim = polys[0].dim
    if any(f.dim != dim for f in polys):
        raise DimensionMismatch("equations have different numbers of variables")
    f0 = obj.get("f0")
    f0 = LaurentPoly.from_json(f0, dim) if f0 is not None else None
    return polys, f0, obj


def canonical_system(polys, f0=None) -> dict:
    out = {"system": [f.to_json() for f in polys]}
    if f0 is not None:
        out["f0"] = f0.to_json()
    return out


def default_f0(dim: int, seed: int) -> LaurentPoly:
    """Generic affine form with seeded uniform real coefficients."""
    return random_generic(unit_simplex_support(dim), seed, UNIFORM)


def _fmt_complex(z, digits=12):
    z = complex(z)
    if z.imag == 0:
        return f"{z.real:.{digits}g}"
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


def _report_table(report, emit):
    lines = [f"{len(report.accepted)} solution(s)"]
    for c in report.accepted:
        coords = ", ".join(f"x{j + 1}={_fmt_complex(v)}" for j, v in enumerate(c.point))
        lines.append(f"  {coords}  f0={_fmt_complex(c.eigenvalue)}  max|res|={c.max_residual:.2e}")
    if emit == "full":
        lines.append(f"p={report.p} q={report.q} p_i={list(report.p_i)} rank22={report.rank22} K={report.K:g}")
        lines.append(f"rejected candidates: {len(report.rejected)}")
        lines.append("timings: " + ", ".join(f"{k}={v:.3f}s" for k, v in report.timings.items()))
    return "\n".join(lines) + "\n"


def _emit_report(args, report):
    if args.format == "table":
        _write(args, _report_table(report, args.emit))
    else:
        _write(args, json.dumps(report.to_json(args.emit), indent=2) + "\n")
    return EXIT_OK if report.accepted else EXIT_NONE


def _run(args, f0, eqs, spec=None):
    if spec is None:
        spec = normalize_spec(f0, eqs)
    report = solve(
        spec,
        epsilon=args.epsilon,
        budget=args.budget,
        do_polish=args.polish,
        keep_matrix=bool(getattr(args, "dump_matrix", None)),
    )
    if getattr(args, "dump_matrix", None):
        report.matrix.write_matrix_market(args.dump_matrix)
    return _emit_report(args, report)


def cmd_solve(args):
    obj = _read_json(args)
    eqs, f0, extras = parse_system(obj)
    if args.f0 is not None:
        try:
            f0 = LaurentPoly.from_json(json.loads(args.f0), eqs[0].dim)
        except json.JSONDecodeError as exc:
            raise InputError(f"--f0 is not valid JSON: {exc}") from exc
    seed = args.seed if args.seed is not None else int(extras.get("seed", 0))
    if args.epsilon is None:
        args.epsilon = float(extras.get("epsilon", DEFAULT_EPSILON))
    if f0 is None:
        f0 = default_f0(eqs[0].dim, seed)
    return _run(args, f0, eqs)


def _int_list(text, what):
    try:
        vals = [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError as exc:
        raise InputError(f"{what} must be comma-separated integers") from exc
    if not vals:
        raise InputError(f"{what} is empty")
    return vals


def cmd_polysolve(args):
    degrees = _int_list(args.degrees, "--degrees")
    if len(degrees) < 2:
        raise InputError("--degrees needs the f0 degree followed by at least one equation degree")
    if args.epsilon is None:
        args.epsilon = DEFAULT_EPSILON
    spec = dense_system(degrees[0], degrees[1:], args.n, args.seed or 0)
    return _run(args, None, None, spec)


def cmd_trilinear_max(args):
    if args.tensor is not None:
        try:
            obj = json.loads(args.tensor)
        except json.JSONDecodeError as exc:
            raise InputError(f"--tensor is not valid JSON: {exc}") from exc
    else:
        obj = _read_json(args)
    tensors = obj if isinstance(obj, list) else [obj]
    results = []
    for t in tensors:
        a = Tensor3.from_json(t)
        r = trilinear_max(a, args.seed or 0, epsilon=args.epsilon or DEFAULT_EPSILON, budget=args.budget)
        results.append((a, r))
    if args.format == "table":
        lines = []
        for a, r in results:
            lines.append(f"{r.value:.8f}")
            for name, v in zip("xyz", (r.x, r.y, r.z)):
                lines.append(f"  {name} = [" + ", ".join(f"{c:.10f}" for c in v) + "]")
        _write(args, "\n".join(lines) + "\n")
    else:
        out = []
        for a, r in results:
            out.append({
                "dims": list(a.dims),
                "value": round(r.value, 8),
                "value_full": r.value,
                "x": r.x.tolist(),
                "y": r.y.tolist(),
                "z": r.z.tolist(),
                "critical_points": r.n_accepted,
                "real_critical_points": r.n_real,
                "degree": r.degree,
            })
        _write(args, json.dumps(out if isinstance(obj, list) else out[0], indent=2) + "\n")
    return EXIT_OK


def _fraction_text(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def cmd_mixed_volume(args):
    obj = _read_json(args)
    supports = obj.get("supports") if isinstance(obj, dict) else obj
    if not isinstance(supports, list) or not supports:
        raise InputError("expected a non-empty list of supports")
    try:
        polys = [convex_hull([tuple(int(c) for c in p) for p in s]) for s in supports]
    except (TypeError, ValueError) as exc:
        raise InputError(f"malformed support: {exc}") from exc
    dim = polys[0].dim
    if len(polys) != dim:
        raise InputError(f"need exactly {dim} supports in dimension {dim}, got {len(polys)}")
    value = mixed_volume(polys)
    if args.format == "table":
        _write(args, _fraction_text(value) + "\n")
    else:
        _write(args, json.dumps({"mixed_volume": _fraction_text(value)}) + "\n")
    return EXIT_OK


def _parse_rows(text):
    if text is None:
        return list(BENCH_ROWS)
    rows = []
    for chunk in text.split(";"):
        if chunk.strip():
            rows.append(tuple(_int_list(chunk, "--rows entry")))
    return rows


def cmd_bench(args):
    rows = _parse_rows(args.rows)
    lines = []
    if rows:
        lines.append(f"{'degrees':<14}{'Steps 1-4 (s)':>14}{'solutions':>11}")
    times = []
    for row in rows:
        if len(row) < 2:
            raise InputError(f"row {row} needs at least two degrees")
        spec = dense_system(row[0], row[1:], args.n, args.seed or 0)
        report = solve(spec, epsilon=args.epsilon or DEFAULT_EPSILON, budget=args.budget)
        t = sum(report.timings[k] for k in ("bases", "assemble", "solve_F"))
        times.append(t)
        label = "(" + ",".join(str(d) for d in row) + ")"
        lines.append(f"{label:<14}{t:>14.3f}{len(report.accepted):>11d}")
    if len(times) > 1 and times[0] > times[-1]:
        print("warning: the first row took longer than the last one", file=sys.stderr)
    _write(args, "\n".join(lines) + ("\n" if lines else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparse-eigsolve",
        description="Solve sparse Laurent polynomial systems through reduced multiplication matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        if inputs:
            p.add_argument("--input", "-i", help="JSON input file (default: stdin)")
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=None, help="seed for every random choice")
        p.add_argument("--epsilon", type=float, default=None, help="identification tolerance")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="maximum number of basis monomials")
        p.add_argument("--format", choices=("json", "table"), default="json")

    p = sub.add_parser("solve", help="solve a system given as JSON term lists")
    common(p)
    p.add_argument("--f0", help="auxiliary polynomial as an inline JSON term list")
    p.add_argument("--emit", choices=("solutions", "full"), default="solutions")
    p.add_argument("--polish", action="store_true", help="Newton-refine candidates before identification")
    p.add_argument("--dump-matrix", help="write the assembled matrix in Matrix Market format")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("polysolve", help="solve a random dense system")
    common(p, inputs=False)
    p.add_argument("--degrees", required=True, help="f0 degree followed by equation degrees, e.g. 1,5,7")
    p.add_argument("--n", type=int, default=2, help="number of variables")
    p.add_argument("--emit", choices=("solutions", "full"), default="solutions")
    p.add_argument("--polish", action="store_true")
    p.set_defaults(func=cmd_polysolve)

    p = sub.add_parser("trilinear-max", help="largest value of a trilinear form on unit spheres")
    common(p)
    p.add_argument("--tensor", help="inline tensor JSON")
    p.set_defaults(func=cmd_trilinear_max)

    p = sub.add_parser("mixed-volume", help="normalized mixed volume of n supports in dimension n")
    common(p)
    p.set_defaults(func=cmd_mixed_volume)

    p = sub.add_parser("bench", help="time steps 1-4 on random dense bivariate systems")
    common(p, inputs=False)
    p.add_argument("--rows", default=None, help="degree tuples separated by ';' (default: the standard table)")
    p.add_argument("--n", type=int, default=2)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", MultiplicityWarning)
            code = args.func(args)
        for msg in dict.fromkeys(str(w.message) for w in caught):
            print(f"warning: {msg}", file=sys.stderr)
        return code
    except RankDeficient as exc:
        print(f"error: {exc}\n{RANK_HINT}", file=sys.stderr)
        return EXIT_RANK
    except NoAcceptedSolutions as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONE
    except (InputError, DimensionMismatch, BasisBudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
