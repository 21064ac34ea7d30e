"""Command-line front end.

    voapart partition --model heisenberg:1 --genus 1 --trunc 2 --points builtin:g1a
    voapart theta --lattice E8 --trunc 3
    voapart compare --a lattice:D16plus --b tensor:lattice:E8,lattice:E8 --genus 1 --trunc 4

Exit codes: 0 ok, 2 usage, 3 budget exceeded, 4 math-domain error,
5 internal invariant violated.  Every number is written as an exact fraction
string; every JSON output carries a "provenance" block.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetError, InvariantError, MathDomainError, ShapeError, VoaError

EXIT_USAGE, EXIT_BUDGET, EXIT_DOMAIN, EXIT_INVARIANT = 2, 3, 4, 5


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers

def _frac(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def load_points(spec: str):
    """builtin:NAME, a JSON file holding a flat list, or a comma list 'w1,z1,...'."""
    from .correlators import PointConfig, builtin_points

    if spec.startswith("builtin:"):
        return builtin_points(spec.split(":", 1)[1])
    p = Path(spec)
    if p.suffix == ".json":
        if not p.exists():
            raise UsageError(f"no such point file {spec}")
        data = json.loads(p.read_text())
        if isinstance(data, dict):
            data = data["points"]
        flat = [x for item in data for x in (item if isinstance(item, list) else [item])]
        return PointConfig(tuple(_frac(x) for x in flat))
    return PointConfig(tuple(_frac(x) for x in spec.split(",")))


_CHARGE = re.compile(r"e\^\[([^\]]*)\]")


def parse_state(model, text: str):
    """'h[1,-1] h[1,-2]', '1', 'h[1,-1] e^[1,0]'; tensor factors separated by '|'."""
    from . import fock
    from .models import TensorModel

    if isinstance(model, TensorModel):
        parts = text.split("|")
        if len(parts) != len(model.factors):
            raise UsageError(f"tensor state needs {len(model.factors)} factors separated by '|'")
        return tuple(parse_state(f, p) for f, p in zip(model.factors, parts))
    m = _CHARGE.search(text)
    charge = None
    if m:
        charge = tuple(int(x) for x in m.group(1).split(",") if x.strip())
        text = _CHARGE.sub("", text)
    try:
        fk = fock.parse_fock(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if any(c > model.rank for c, _ in fk):
        raise UsageError(f"color out of range for rank {model.rank}")
    if model.charged:
        charge = charge or (0,) * model.rank
        if len(charge) != model.rank:
            raise UsageError(f"charge needs {model.rank} coordinates")
        return (fk, charge)
    if charge and any(charge):
        raise UsageError("charges need a lattice model")
    return fk


def parse_insertion(model, text: str):
    if "@" not in text:
        raise UsageError(f"insertion {text!r} must look like STATE@POINT")
    state, _, point = text.rpartition("@")
    return {parse_state(model, state): Fraction(1)}, _frac(point)


def _model(desc):
    from .models import parse_model

    return parse_model(desc)


# ---------------------------------------------------------------------------
# output

def provenance(args, **extra) -> dict:
    keep = {k: v for k, v in sorted(vars(args).items())
            if k not in ("func", "out", "format", "workers") and v is not None}
    return {"code": "voapart", "version": __version__, "command": args.command,
            "arguments": {k: str(v) for k, v in keep.items()}, **extra}


def _point_provenance(points) -> dict:
    from .schottky import certified_radius

    r = certified_radius(points)
    return {"points": [str(p) for p in points.points],
            "U_gr": {"r": str(r), "q_bound": f"|q_i| < {r * r}",
                     "plus_ordering": True}}


def emit(args, payload: dict, table=None):
    """Write JSON (default) or CSV (``table`` rows) to --out or stdout."""
    if args.format == "csv":
        if table is None:
            raise UsageError("this command has no tabular output; use --format json")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for row in table:
            w.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _series_payload(series):
    return series.to_json_obj()


# ---------------------------------------------------------------------------
# commands

def cmd_partition(args):
    from .partition import PartitionRequest, Separating, default_budget, normalized_partition, partition_series

    if args.variant and args.variant != "plain":
        if not args.variant.startswith("sep:") or args.separating:
            raise UsageError("--variant takes plain or sep:i,w,z,k")
        args.separating = args.variant[4:]
    model = _model(args.model)
    points = load_points(args.points)
    budget = args.budget or default_budget()
    if args.normalized:
        if args.separating:
            raise UsageError("--normalized and --separating are exclusive")
        series = normalized_partition(model, args.genus, args.trunc, points, args.workers, budget)
    else:
        variant = None
        if args.separating:
            try:
                i, w, z, k = args.separating.split(",")
            except ValueError:
                raise UsageError("--separating takes i,w,z,k") from None
            variant = Separating(int(i), _frac(w), _frac(z), int(k))
        req = PartitionRequest(model, args.genus, args.trunc, points, variant, budget, args.workers)
        series = partition_series(req)
    payload = {"provenance": provenance(args, model=model.name, truncation=args.trunc,
                                        **_point_provenance(points)),
               "series": _series_payload(series)}
    emit(args, payload, series.csv_rows())


def cmd_oracle(args):
    from .partition import genus1_oracle

    model = _model(args.model)
    points = load_points(args.points)
    if points.genus != 1:
        raise UsageError("the trace oracle needs one (w, z) pair")
    series = genus1_oracle(model, args.trunc, points)
    payload = {"provenance": provenance(args, model=model.name, truncation=args.trunc,
                                        **_point_provenance(points)),
               "graded_dims": model.graded_dims(args.trunc),
               "series": _series_payload(series)}
    emit(args, payload, series.csv_rows())


def cmd_correlate(args):
    from .correlators import mode_oracle, wick_correlator

    model = _model(args.model)
    items = [parse_insertion(model, t) for t in args.insertions]
    value = wick_correlator(model, items)
    out = {"value": str(value)}
    if args.check:
        res = mode_oracle(model, items)
        out["oracle"] = str(res.value)
        out["oracle_certified"] = res.certified
        if res.value != value:
            raise InvariantError(f"Wick {value} differs from the mode expansion {res.value}")
    payload = {"provenance": provenance(args, model=model.name), **out}
    emit(args, payload, [["num", "den"], [str(value.numerator), str(value.denominator)]])


def cmd_theta(args):
    from .lattice import load_lattice, theta_genus1, theta_genus2

    L = load_lattice(args.lattice)
    if args.genus == 1:
        coeffs = [int(c) for c in theta_genus1(L, args.trunc, args.workers).coeffs]
        payload = {"provenance": provenance(args, lattice=L.name, gram=[list(r) for r in L.gram]),
                   "coefficients": [str(c) for c in coeffs]}
        table = [["n", "count"]] + [[str(n), str(c)] for n, c in enumerate(coeffs)]
    elif args.genus == 2:
        reps = theta_genus2(L, args.trunc)
        rows = sorted(reps.items())
        payload = {"provenance": provenance(args, lattice=L.name, gram=[list(r) for r in L.gram]),
                   "representation_numbers": [{"T": [str(a), str(b), str(c)], "count": str(n)}
                                              for (a, b, c), n in rows]}
        table = [["a", "b", "c", "count"]] + [[str(a), str(b), str(c), str(n)] for (a, b, c), n in rows]
    else:
        raise UsageError("theta supports genus 1 and 2")
    emit(args, payload, table)


def cmd_pv(args):
    from .casimir import pv_filtration

    model = _model(args.model)
    pv = pv_filtration(model, args.cutoff, window=args.window, kmax=args.kmax)
    table = pv.table()
    payload = {"provenance": provenance(args, model=model.name),
               "stable": pv.stable,
               "table": [{k: str(v) for k, v in row.items()} for row in table]}
    emit(args, payload, [["weight", "dim_PV", "dim_V"]] +
         [[str(r["weight"]), str(r["dim_PV"]), str(r["dim_V"])] for r in table])


def cmd_compare(args):
    from .partition import compare_partitions

    a, b = _model(args.a), _model(args.b)
    points = load_points(args.points)
    res = compare_partitions(a, b, args.genus, args.trunc, points, args.workers, args.method, args.budget)
    payload = {"provenance": provenance(args, a=a.name, b=b.name, **_point_provenance(points)),
               "result": str(res), "equal": res.equal, "method": res.method}
    if res.exponent is not None:
        payload["exponent"] = list(res.exponent)
        payload["a_value"], payload["b_value"] = str(res.a_value), str(res.b_value)
    if args.format == "json" and not args.out:
        print(str(res), file=sys.stderr)
    emit(args, payload, [["result"], [str(res)]])


def cmd_schottky(args):
    from .schottky import (
        SchottkyGenerators,
        fixed_points_multiplier,
        from_wzq,
        in_U_gr,
        parse_gauss,
        plumbing_check,
        to_wzq,
    )

    try:
        data = json.loads(Path(args.input).read_text() if Path(args.input).exists() else args.input)
    except json.JSONDecodeError as exc:
        raise UsageError(f"schottky input is not JSON: {exc}") from None
    g = lambda v: parse_gauss(str(v))
    if args.action == "convert":
        if "q" in data:
            fp = fixed_points_multiplier(from_wzq(g(data["w"]), g(data["z"]), g(data["q"])))
            out = {"W": str(fp.W), "Z": str(fp.Z), "mu": str(fp.mu), "exact": fp.exact}
            if not fp.exact:
                out["error_bound"] = repr(fp.error)
        else:
            w, z, q = to_wzq(g(data["W"]), g(data["Z"]), g(data["mu"]))
            out = {"w": str(w), "z": str(z), "q": str(q)}
    else:
        gens = SchottkyGenerators(tuple((g(h[0]), g(h[1]), g(h[2])) for h in data["handles"]))
        if args.action == "check-ur":
            rep = in_U_gr(gens, _frac(data.get("r", args.r)))
            out = {"inside": rep.inside, "plus": rep.plus, "reasons": list(rep.reasons)}
        else:
            samples = [None if s in (None, "inf") else g(s) for s in data.get("samples", [0])]
            out = {"plumbing": plumbing_check(gens, samples)}
    payload = {"provenance": provenance(args), **out}
    emit(args, payload)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="voapart", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"voapart {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, tabular=True):
        sp.add_argument("--format", choices=("json", "csv") if tabular else ("json",), default="json")
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--budget", type=int, help="max Wick evaluations (env VOAPART_BUDGET)")

    sp = sub.add_parser("partition", help="Z_{V,g} as a truncated series")
    sp.add_argument("--model", required=True)
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--points", required=True)
    sp.add_argument("--separating", help="i,w,z,k for the separating variant")
    sp.add_argument("--variant", help="plain | sep:i,w,z,k (same as --separating)")
    sp.add_argument("--normalized", action="store_true", help="divide by Z_{M(1)}^c")
    common(sp)
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("oracle", help="genus-one trace oracle Tr mu^{L_0}")
    sp.add_argument("--model", required=True)
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--points", default="builtin:g1a")
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("correlate", help="sphere correlator, STATE@POINT ...")
    sp.add_argument("--model", required=True)
    sp.add_argument("insertions", nargs="+")
    sp.add_argument("--check", action="store_true", help="cross-check with the mode expansion")
    common(sp)
    sp.set_defaults(func=cmd_correlate)

    sp = sub.add_parser("theta", help="lattice theta series / representation numbers")
    sp.add_argument("--lattice", required=True)
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--genus", type=int, default=1)
    common(sp)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("pv", help="graded dimensions of the Casimir subalgebra PV")
    sp.add_argument("--model", required=True)
    sp.add_argument("--cutoff", type=int, required=True)
    sp.add_argument("--window", type=int, default=2)
    sp.add_argument("--kmax", type=int)
    common(sp)
    sp.set_defaults(func=cmd_pv)

    sp = sub.add_parser("compare", help="first differing coefficient of two partition functions")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--genus", type=int, default=1)
    sp.add_argument("--trunc", type=int, required=True)
    sp.add_argument("--points", default=None)
    sp.add_argument("--method", choices=("auto", "casimir", "oracle"), default="auto")
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("schottky", help="Schottky coordinates: convert | check-ur | plumb")
    sp.add_argument("action", choices=("convert", "check-ur", "plumb"))
    sp.add_argument("input", help="JSON text or a JSON file")
    sp.add_argument("--r", default="1")
    common(sp, tabular=False)
    sp.set_defaults(func=cmd_schottky)
    return p


_DEFAULT_POINTS = {1: "builtin:g1a", 2: "builtin:g2a", 3: "builtin:g3a"}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    if getattr(args, "out", None) in ("json", "csv"):
        # "--out csv" names the format rather than a file
        args.format, args.out = args.out, None
    if getattr(args, "points", "") is None:
        args.points = _DEFAULT_POINTS.get(args.genus)
        if args.points is None:
            print("error: --points is required for this genus", file=sys.stderr)
            return EXIT_USAGE
    if getattr(args, "workers", 1) < 1 or (getattr(args, "budget", None) or 1) <= 0:
        print("error: --workers and --budget must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ShapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MathDomainError, ZeroDivisionError) as exc:
        print(f"math-domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvariantError, VoaError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    return 0


if __name__ == "__main__":
    sys.exit(main())
