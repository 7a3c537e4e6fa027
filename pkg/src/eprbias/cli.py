"""Command-line front end.

Exit codes: 0 success, 1 invalid arguments, 2 verification failure.
Figure tables are written with 6 significant digits so output is byte-stable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import figures
from .errors import EprBiasError, InvalidArgument
from .protocols import EprRecipe, GhzRecipe, make_epr_pair
from .teleport import (
    coherent_signal,
    max_coherent_fidelity,
    optimal_squeezed_signal_gain,
    simulate_teleporter,
    squeezed_signal,
    squeezed_signal_fidelity,
)
from .verify import run_verification

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _table(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{k: float(_fmt(v)) for k, v in r.items()} for r in rows], indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for r in rows:
        w.writerow([_fmt(v) for v in r.values()])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _to_db(rows: list[dict], key: str) -> list[dict]:
    res = []
    for r in rows:
        r = dict(r)
        x = r.pop(key)
        res.append({"squeezing_db": -10.0 * math.log10(x) + 0.0, **r})
    return res


def _recipe(args, kind):
    if args.recipe:
        text = args.recipe
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        try:
            return kind.from_json(text)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise InvalidArgument(f"bad recipe: {exc}") from None
    if kind is EprRecipe:
        return EprRecipe.from_amplitude(args.v1, args.v2)
    return GhzRecipe.from_amplitude(args.v1, args.v2, args.v3)


def cmd_fig1(args) -> int:
    rows = figures.fig1_rows(figures.SweepConfig.parse(args.range))
    _emit(_table(_to_db(rows, "s") if args.db else rows, args.format), args.out)
    return EXIT_OK


def cmd_fig3(args) -> int:
    rows = figures.fig3_rows(figures.SweepConfig.parse(args.range))
    _emit(_table(_to_db(rows, "s") if args.db else rows, args.format), args.out)
    return EXIT_OK


def cmd_fig4(args) -> int:
    rows = figures.fig4_rows(figures.SweepConfig.parse(args.range), args.vsqz)
    _emit(_table(_to_db(rows, "v") if args.db else rows, args.format), args.out)
    return EXIT_OK


def cmd_epr_report(args) -> int:
    rep = figures.epr_report(_recipe(args, EprRecipe), args.gain)
    _emit(json.dumps(rep, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_ghz_report(args) -> int:
    rep = figures.ghz_report(_recipe(args, GhzRecipe), args.gain)
    _emit(json.dumps(rep, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_teleport(args) -> int:
    v1, v2, vs = args.v1, args.v2, args.vsqz
    if args.range:
        cfg = figures.SweepConfig.parse(args.range, unit_interval=False)
        if cfg.lo <= 0:
            raise InvalidArgument("gains must be positive")
        rows = [
            {"v1_plus": v1, "v2_minus": v2, "gain": float(g), "v_sqz": vs,
             "fidelity": squeezed_signal_fidelity(v1, v2, g, vs).fidelity}
            for g in cfg.points()
        ]
        _emit(_table(rows, args.format), args.out)
        return EXIT_OK
    if args.gain is None:
        gain = optimal_squeezed_signal_gain(v1, v2, vs) if vs != 1.0 else max_coherent_fidelity(v1, v2)[0]
    else:
        gain = args.gain
    if math.isinf(gain):
        raise InvalidArgument("optimal gain is unbounded for v1 = 0; pass --gain")
    closed = squeezed_signal_fidelity(v1, v2, gain, vs)
    result = {"report": None, "closed_form": closed.to_dict(), "output_mean": None}
    # a zero variance is the infinite-squeezing limit: closed form only
    if v1 > 0 and v2 > 0:
        # input 1 amplitude variance v1, input 2 phase variance v2
        resource = make_epr_pair(EprRecipe.from_amplitude(v1, 1.0 / v2))
        x, p = args.signal
        sig = coherent_signal(x, p) if vs == 1.0 else squeezed_signal(vs, x, p)
        out, rep = simulate_teleporter(resource, sig, gain)
        result["report"] = rep.to_dict()
        result["output_mean"] = out.mean.tolist()
    _emit(json.dumps(result, indent=1) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    summary = run_verification(
        seed=args.seed, n_samples=args.samples, mc_tol=args.mc_tol,
        fock_tol=args.fock_tol, cutoff=args.cutoff,
    )
    _emit(json.dumps(summary, indent=1, sort_keys=True) + "\n", args.out)
    return EXIT_OK if summary["pass"] else EXIT_VERIFY


def _pair(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(",")
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError("expected 'x,p'") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eprbias", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, default_range=None, fmt=True):
        if default_range is not None:
            sp.add_argument("--range", default=default_range, help="lo:hi:n (default %(default)s)")
        if fmt:
            sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output path (default stdout)")

    for name, fn, rng, help_ in (
        ("fig1", cmd_fig1, "0.05:1:20", "EPR product vs squeezing, one and two squeezers"),
        ("fig3", cmd_fig3, "0.05:1:20", "coherent-signal fidelity before/after the OPAs"),
        ("fig4", cmd_fig4, "0.05:1:20", "squeezed-signal fidelity with/without gain"),
    ):
        sp = sub.add_parser(name, help=help_)
        common(sp, rng)
        sp.add_argument("--db", action="store_true", help="x column as squeezing in dB (-10 log10 s)")
        sp.add_argument("--seed", type=int, default=0, help="accepted for uniformity; figures are deterministic")
        if name == "fig4":
            sp.add_argument("--vsqz", type=float, default=0.1)
        sp.set_defaults(func=fn)

    sp = sub.add_parser("epr-report", help="EPR report before/after symmetrization")
    sp.add_argument("--recipe", help="JSON recipe or path to one")
    sp.add_argument("--v1", type=float, default=0.25, help="input 1 amplitude variance")
    sp.add_argument("--v2", type=float, default=1.0, help="input 2 amplitude variance")
    sp.add_argument("--gain", type=float, help="OPA gain (default: symmetrizing gain)")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_epr_report)

    sp = sub.add_parser("ghz-report", help="GHZ report before/after the local OPAs")
    sp.add_argument("--recipe", help="JSON recipe or path to one")
    sp.add_argument("--v1", type=float, default=0.25)
    sp.add_argument("--v2", type=float, default=1.0)
    sp.add_argument("--v3", type=float, default=1.0)
    sp.add_argument("--gain", type=float, help="OPA gain (default: ghz_symmetrizing_gain)")
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_ghz_report)

    sp = sub.add_parser("teleport", help="simulate the teleporter or sweep the OPA gain")
    sp.add_argument("--v1", type=float, default=0.25, help="resource input 1 amplitude variance V1+")
    sp.add_argument("--v2", type=float, default=1.0, help="resource input 2 phase variance V2-")
    sp.add_argument("--gain", type=float, help="OPA gain (default: optimal)")
    sp.add_argument("--vsqz", type=float, default=1.0, help="signal amplitude variance (1 = coherent)")
    sp.add_argument("--signal", type=_pair, default=(0.0, 0.0), help="signal mean 'x,p'")
    sp.add_argument("--range", help="sweep gain over lo:hi:n and emit a table")
    common(sp)
    sp.set_defaults(func=cmd_teleport)

    sp = sub.add_parser("verify", help="run Monte-Carlo and Fock cross-checks")
    sp.add_argument("--seed", type=int, default=12345)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--mc-tol", type=float, default=0.01, help="relative tolerance for sampled V_cv")
    sp.add_argument("--fock-tol", type=float, default=1e-5, help="absolute covariance tolerance")
    sp.add_argument("--cutoff", type=int, default=12)
    common(sp, fmt=False)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EprBiasError, OSError) as exc:
        print(f"eprbias: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except figures.CrossCheckError as exc:
        print(f"eprbias: cross-check failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
