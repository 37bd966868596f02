"""``mqsurf`` command line.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on usage
or configuration errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import curves, groups, pipeline
from .pipeline import ConfigError, ExhaustedResamplesError, PipelineConfig
from .polynomials import build_curve_forms
from .report import VerificationReport, render_report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_primes(text: str) -> tuple[int, ...]:
    try:
        primes = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError as exc:
        raise ConfigError(f"bad prime list {text!r}") from exc
    if not primes:
        raise ConfigError("empty prime list")
    return primes


def load_config_file(path: str) -> dict:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    allowed = {"seed", "primes", "max_resamples", "r", "s", "r_coeffs", "s_coeffs"}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    return data


def build_config(args) -> PipelineConfig:
    """Precedence: command line, then MQ_PRIMES (primes only), then config file, then defaults."""
    file_cfg = load_config_file(args.config) if getattr(args, "config", None) else {}
    primes = pipeline.DEFAULT_PRIMES
    if "primes" in file_cfg:
        fp = file_cfg["primes"]
        primes = parse_primes(fp) if isinstance(fp, str) else tuple(int(x) for x in fp)
    env = os.environ.get("MQ_PRIMES")
    if env:
        primes = parse_primes(env)
    if getattr(args, "primes", None):
        primes = parse_primes(args.primes)

    seed = args.seed if args.seed is not None else file_cfg.get("seed", 42)
    r_text = args.r if args.r is not None else file_cfg.get("r")
    s_text = args.s if args.s is not None else file_cfg.get("s")
    r_coeffs = file_cfg.get("r_coeffs") if r_text is None else None
    s_coeffs = file_cfg.get("s_coeffs") if s_text is None else None
    explicit = any(x is not None for x in (r_text, s_text, r_coeffs, s_coeffs))
    if explicit and args.seed is not None:
        raise ConfigError("--seed and explicit forms are mutually exclusive")
    max_resamples = getattr(args, "max_resamples", None) or file_cfg.get("max_resamples", 100)
    try:
        cfg = PipelineConfig(
            r_coeffs=r_coeffs,
            s_coeffs=s_coeffs,
            seed=int(seed),
            primes=primes,
            max_resamples=int(max_resamples),
            emit_json=bool(getattr(args, "json", None)),
            output_path=getattr(args, "json", None),
            r_text=r_text,
            s_text=s_text,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    cfg.validate()
    return cfg


def _emit(rep: VerificationReport, args) -> int:
    if getattr(args, "json", None):
        doc = render_report(rep, "json")
        if args.json == "-":
            sys.stdout.write(doc)
        else:
            Path(args.json).write_text(doc, encoding="utf-8")
    if not args.quiet and getattr(args, "json", None) != "-":
        sys.stdout.write(render_report(rep, "text"))
    return EXIT_OK if rep.overall else EXIT_FAIL


def cmd_verify(args) -> int:
    cfg = build_config(args)
    return _emit(pipeline.run_pipeline(cfg), args)


def cmd_invariants(args) -> int:
    rep = VerificationReport({"suite": "ledger"})
    rep.extend(pipeline.ledger_suite())
    rep.extend(pipeline.covers_suite())
    return _emit(rep, args)


def cmd_certify(args) -> int:
    args.primes = str(args.prime)
    cfg = build_config(args)
    if cfg.has_explicit_forms:
        r, s = pipeline._explicit_forms(cfg)
    else:
        r, s, _, _ = pipeline.sample_generic_forms(cfg.seed, cfg.primes, cfg.max_resamples)
    v2, v3 = build_curve_forms(r, s)
    cert = curves.certify_over_Fp(v2, v3, args.prime, backend=args.backend)
    out = {"r": str(r), "s": str(s), **cert.summary(), "valid": cert.valid}
    if args.points:
        out["points"] = [list(pt) for pt in cert.points]
    if not args.quiet:
        print(json.dumps(out, indent=2))
    return EXIT_OK if cert.valid else EXIT_FAIL


def cmd_count_covers(args) -> int:
    try:
        n = groups.count_order_q_subgroups(args.q, args.rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    line = f"order-{args.q} subgroups of (Z/{args.q})^{args.rank}: {n}"
    ok = True
    if args.q**args.rank <= 3**6:
        m = len(groups.enumerate_order_q_subgroups(args.q, args.rank))
        ok = m == n
        line += f" (enumerated: {m})"
    if not args.quiet:
        print(line)
    return EXIT_OK if ok else EXIT_FAIL


def _add_form_args(p):
    p.add_argument("--seed", type=int, default=None, help="PCG64 seed for sampling r, s (default 42)")
    p.add_argument("--r", default=None, help='binary quadratic in x0, x1, e.g. "x0^2 - 3*x0*x1 + x1^2"')
    p.add_argument("--s", default=None, help="binary cubic in x0, x1")
    p.add_argument("--max-resamples", type=int, default=None)
    p.add_argument("--config", default=None, help="JSON file with keys seed, primes, max_resamples, r, s, r_coeffs, s_coeffs")
    p.add_argument("--quiet", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="mqsurf", description="Exact verification of the (p_g, q, K^2) = (2, 2, 7) construction.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run the full pipeline")
    _add_form_args(v)
    v.add_argument("--primes", default=None, help="comma-separated primes = 1 mod 3 (default 7,13)")
    v.add_argument("--json", default=None, metavar="PATH", help="write the JSON report ('-' for stdout)")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("invariants", help="intersection ledger only")
    i.add_argument("--json", default=None, metavar="PATH")
    i.add_argument("--quiet", action="store_true")
    i.set_defaults(func=cmd_invariants)

    c = sub.add_parser("certify", help="finite-field certificate for one prime")
    _add_form_args(c)
    c.add_argument("--prime", type=int, required=True)
    c.add_argument("--backend", choices=["numba", "numpy", "exact"], default=None)
    c.add_argument("--points", action="store_true", help="include the point list")
    c.set_defaults(func=cmd_certify)

    k = sub.add_parser("count-covers", help="count order-q subgroups of (Z/q)^rank")
    k.add_argument("--q", type=int, default=3)
    k.add_argument("--rank", type=int, default=4)
    k.add_argument("--quiet", action="store_true")
    k.set_defaults(func=cmd_count_covers)
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ExhaustedResamplesError) as exc:
        print(f"mqsurf: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
