"""Command-line entry point.

    chordgf evolve --model point --orientable --max-k 4 --one-backbone 8
    chordgf oracle --sizes 4 --k 2 --non-orientable
    chordgf check golden
    chordgf matrix --ensemble hermitian --N 4 --p 2 --s 1 --m 4
    chordgf freeprob free-add --a 1,0,1,0,2 --b 1,1,1,1,1

Output goes to ``--output`` if given, else to ``$CHORDGF_OUTPUT_DIR/<name>``
when that variable is set, else to stdout.  Exit codes: 0 success, 1 failed
checks, 2 configuration errors, 3 integrality violations.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, tables
from .checks import SUITES, run_suite
from .evolution import IntegralityViolation, ModelSpec, SpectrumKind, count_table, evolve
from .freeprob import (
    NonInvertibleFirstMoment,
    ZeroLeadingWeight,
    free_add,
    free_mul,
    genus0_length_gf,
    r_transform,
    s_transform,
)
from .matrix_model import EnsembleConfig, exact_moment, exact_product_moment, sample_trace_powers
from .oracle import count_types
from .powerseries import PowerSeries1
from .spectra import Orientability, Spectrum

log = logging.getLogger("chordgf")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_INTEGRALITY = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


def _variant(args) -> Orientability:
    return Orientability.NON_ORIENTABLE if args.non_orientable else Orientability.ORIENTABLE


def _add_variant(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--orientable", action="store_true", help="orientable surfaces (default)")
    g.add_argument("--non-orientable", action="store_true", help="allow twisted chords")


def _add_output(p, formats=("json", "csv")):
    p.add_argument("--output", "-o", help="output file, or '-' for stdout")
    p.add_argument("--format", choices=formats, default=formats[0])


def parse_spectrum(text: str) -> Spectrum:
    """``"e1+2e3"`` or ``"1,3,3"`` (a list of sizes)."""
    text = text.strip()
    if not text or text == "0":
        return Spectrum()
    if "e" in text:
        acc: dict[int, int] = {}
        for part in text.split("+"):
            mult, _, idx = part.strip().partition("e")
            acc[int(idx)] = acc.get(int(idx), 0) + (int(mult) if mult else 1)
        return Spectrum(acc)
    return Spectrum.from_list(int(v) for v in text.split(","))


def parse_rationals(text: str) -> list[Fraction]:
    return [Fraction(v.strip()) for v in text.split(",") if v.strip()]


def _emit(args, default_name: str, text: str) -> None:
    target = args.output
    if target is None:
        out_dir = os.environ.get("CHORDGF_OUTPUT_DIR")
        if out_dir:
            target = str(Path(out_dir) / default_name)
    if target is None or target == "-":
        sys.stdout.write(text)
        return
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


# --------------------------------------------------------------------------
# evolve / oracle


def cmd_evolve(args) -> int:
    variant = _variant(args)
    kind = SpectrumKind(args.model)
    if args.one_backbone is not None:
        max_weight, max_b = args.one_backbone, 1
    else:
        max_weight, max_b = args.max_weight, args.max_b
    try:
        spec = ModelSpec(kind, variant, args.max_k, max_weight, max_b)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    state = evolve(spec)
    rows = []
    only = Spectrum.e(args.one_backbone) if args.one_backbone is not None else None
    for item, count in count_table(state):
        if kind is SpectrumKind.VERTEX:
            k, x, s, _ = item
            rows.append(
                {"variant": variant.value, "model": "vertex", "g_or_h": (x + 2) // 2, "k": k, "l": "",
                 "b_spec": "", "n_or_p_spec": repr(s), "count": str(count)}
            )
            continue
        if only is not None and item.b != only and kind is SpectrumKind.POINT:
            continue
        rows.append(tables.type_row(item, kind.value, count))
    config = {
        "model": kind.value, "variant": variant.value, "max_k": spec.max_k,
        "max_weight": spec.max_weight, "max_b": spec.max_b, "one_backbone": args.one_backbone,
    }
    return _write_table(args, "evolve", config, rows, f"evolve-{kind.value}-{variant.value}-k{spec.max_k}")


def cmd_oracle(args) -> int:
    variant = _variant(args)
    sizes = [int(v) for v in args.sizes.split(",")]
    if any(s < 0 for s in sizes) or not sizes:
        raise ConfigError("backbone sizes must be non-negative integers")
    ks = [args.k] if args.k is not None else range(sum(sizes) // 2 + 1)
    rows = []
    for k in ks:
        if 2 * k > sum(sizes):
            raise ConfigError(f"{k} chords do not fit on {sum(sizes)} vertices")
        for t, c in count_types(sizes, k, variant, True).items():
            rows.append(tables.type_row(t, "point", c))
            if t.p is not None:
                rows.append(tables.type_row(t, "length", c))
    config = {"sizes": sizes, "k": args.k, "variant": variant.value, "connected_only": True}
    name = "oracle-" + "_".join(map(str, sizes)) + f"-{variant.value}"
    return _write_table(args, "oracle", config, rows, name)


def _write_table(args, command, config, rows, stem) -> int:
    rows = tables.sort_rows(rows)
    head = tables.header(command, config)
    if args.format == "csv":
        text = tables.dumps_csv(head, rows)
    else:
        text = tables.dumps_json(head, {"rows": rows})
    _emit(args, f"{stem}.{args.format}", text)
    return EXIT_OK


# --------------------------------------------------------------------------
# check


def cmd_check(args) -> int:
    options = {}
    if args.suite == "oracle":
        options = {"max_vertices": args.max_vertices, "multi_vertices": min(args.multi_vertices, args.max_vertices)}
    elif args.suite == "matrix":
        options = {"samples": args.samples, "seed": args.seed}
    results = run_suite(args.suite, **options)
    ok = all(r.passed for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.criterion}: {r.name} ({r.seconds:.2f}s)", file=sys.stderr)
    head = tables.header("check", {"suite": args.suite, **options})
    body = {"passed": ok, "results": [{k: v for k, v in r.to_json().items() if k != "seconds"} for r in results]}
    _emit(args, f"check-{args.suite}.json", json.dumps({"header": head, **body}, sort_keys=True, indent=1, default=str) + "\n")
    return EXIT_OK if ok else EXIT_FAILED


# --------------------------------------------------------------------------
# matrix


def cmd_matrix(args) -> int:
    try:
        config = EnsembleConfig(args.ensemble, args.N, args.p, args.s, args.samples, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if (args.m is None) == (args.b_spec is None):
        raise ConfigError("give exactly one of --m and --b-spec")
    s_exact = Fraction(str(args.s))
    if args.m is not None:
        variant = config.ensemble.variant
        state = evolve(ModelSpec(SpectrumKind.POINT, variant, max_k=max(args.m // 2, 0), max_weight=max(args.m, 1)))
        exact = exact_moment(state, args.m, s_exact, args.p, args.N).constant()
        est = sample_trace_powers(config, args.m)
        target = {"m": args.m}
    else:
        b = parse_spectrum(args.b_spec)
        exact = exact_product_moment(b, config.ensemble, s_exact, args.p, args.N).constant()
        est = sample_trace_powers(config, b)
        target = {"b_spec": repr(b)}
    report = {
        "mean": est.mean, "stderr": est.stderr, "samples": est.samples,
        "exact": str(exact), "zscore": est.zscore(float(exact)),
    }
    head = tables.header("matrix", {**config.to_json(), **target})
    _emit(args, "matrix.json", json.dumps({"header": head, **report}, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# freeprob


def cmd_freeprob(args) -> int:
    order = args.order
    try:
        if args.op == "genus0-length":
            result = genus0_length_gf(parse_rationals(args.weights), order)
        else:
            a = PowerSeries1(parse_rationals(args.a))
            if args.op == "r-transform":
                result = r_transform(a, order)
            elif args.op == "s-transform":
                result = s_transform(a, order)
            else:
                b = PowerSeries1(parse_rationals(args.b))
                fn = free_add if args.op == "free-add" else free_mul
                result = fn(a, b, order)
    except (NonInvertibleFirstMoment, ZeroLeadingWeight, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    head = tables.header("freeprob", {"op": args.op, "order": order, "a": args.a, "b": args.b, "weights": args.weights})
    _emit(args, f"freeprob-{args.op}.json", json.dumps({"header": head, "coefficients": result.to_json()}, sort_keys=True, indent=1) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chordgf", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"chordgf {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="evolve a generating function and write its count table")
    p.add_argument("--model", choices=[k.value for k in SpectrumKind], default="point")
    _add_variant(p)
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--max-weight", type=int, default=8)
    p.add_argument("--max-b", type=int, default=1)
    p.add_argument("--one-backbone", type=int, metavar="M", help="single backbone with M vertices")
    _add_output(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("oracle", help="brute-force type histogram on ordered backbones")
    p.add_argument("--sizes", required=True, help="comma-separated backbone sizes, e.g. 4,2")
    p.add_argument("--k", type=int, help="number of chords (default: all)")
    _add_variant(p)
    _add_output(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("check", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--max-vertices", type=int, default=10)
    p.add_argument("--multi-vertices", type=int, default=8)
    p.add_argument("--samples", type=int, default=200_000)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("matrix", help="Monte Carlo estimate of a Gaussian trace moment")
    p.add_argument("--ensemble", choices=["hermitian", "real-symmetric"], default="hermitian")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=int, default=0)
    p.add_argument("--s", type=float, default=0.0)
    p.add_argument("--m", type=int)
    p.add_argument("--b-spec", help="product of traces, e.g. e1+e2")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("freeprob", help="transforms and free convolutions of moment sequences")
    p.add_argument("op", choices=["r-transform", "s-transform", "free-add", "free-mul", "genus0-length"])
    p.add_argument("--a", help="moments M0,M1,... (rationals)")
    p.add_argument("--b", help="second moment sequence")
    p.add_argument("--weights", help="s1,s2,... for genus0-length")
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_freeprob)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "freeprob":
        needed = {"genus0-length": ["weights"], "free-add": ["a", "b"], "free-mul": ["a", "b"]}.get(args.op, ["a"])
        missing = [n for n in needed if getattr(args, n) is None]
        if missing or (args.op == "genus0-length" and args.order is None):
            print(f"chordgf: freeprob {args.op} needs --{', --'.join(missing or ['order'])}", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"chordgf: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegralityViolation as exc:
        print(f"chordgf: integrality violation: {exc}", file=sys.stderr)
        return EXIT_INTEGRALITY


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
