"""Command line entry point.

Exit codes: 0 success, 1 usage or config error, 2 numeric failure,
3 selftest failure.
"""

import argparse
import logging
import sys

from . import analytics, selftest
from .channel import AttackKind, ScenarioParams
from .experiments import ConfigError, parse_config, run_sweep, write_csv
from .montecarlo import MIN_SAMPLES, estimate_rates

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_SELFTEST = 0, 1, 2, 3

log = logging.getLogger("pcattack")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser():
    p = _Parser(prog="pcattack", description="Product channel attack secrecy metrics.")
    p.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    s.add_argument("--config", help="key = value config file")
    s.add_argument("--preset", choices=("fig1", "fig2", "fig3"))
    s.add_argument("--out", required=True, help="CSV path, or - for stdout")
    s.add_argument("--workers", type=int, default=1, help="concurrent sweep points")

    q = sub.add_parser("point", help="evaluate one operating point")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--gamma0-db", type=float, required=True)
    q.add_argument("--gammaE-db", type=float, required=True)
    q.add_argument("--attack", default="rayleigh", help="none, rayleigh or uniform")
    q.add_argument("--mc-samples", type=int, default=0)
    q.add_argument("--seed", type=int, default=42)

    sub.add_parser("selftest", help="run the invariant checks")
    return p


def _sweep(args):
    if args.config is None and args.preset is None:
        log.error("sweep needs --config and/or --preset")
        return EXIT_USAGE
    if args.workers < 1:
        log.error("--workers must be >= 1")
        return EXIT_USAGE
    text = ""
    if args.config is not None:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            log.error("cannot read config: %s", exc)
            return EXIT_USAGE
    try:
        config = parse_config(text, preset=args.preset)
    except ConfigError as exc:
        log.error("config error: %s", exc)
        return EXIT_USAGE
    rows = run_sweep(config, workers=args.workers)
    if args.out == "-":
        write_csv(rows, sys.stdout.buffer)
        sys.stdout.flush()
    else:
        with open(args.out, "wb") as fh:
            write_csv(rows, fh)
    failed = [r for r in rows if r.error]
    if failed:
        log.error("%d of %d rows failed", len(failed), len(rows))
        return EXIT_NUMERIC
    return EXIT_OK


def _point(args):
    try:
        attack = AttackKind.parse(args.attack)
        params = ScenarioParams(args.m, args.gamma0_db, args.gammaE_db)
        if args.mc_samples and args.mc_samples < MIN_SAMPLES:
            raise ValueError(f"--mc-samples must be 0 or >= {MIN_SAMPLES}")
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    try:
        report = analytics.secrecy_rate(params, attack)
        lines = [
            f"M = {params.m}",
            f"gamma0_db = {params.gamma0_db:g}",
            f"gammaB_db = {params.gammaB_db:.6g}",
            f"gammaE_db = {params.gammaE_db:g}",
            f"attack = {attack.value}",
            f"method = {report.method}",
            f"c_bar_b = {report.c_bar_b:.9g}",
            f"loss = {report.loss:.9g}",
            f"rate = {report.rate:.9g}",
        ]
        if attack is not AttackKind.NONE:
            cs = analytics.secrecy_rate(params, AttackKind.NONE)
            lines += [
                f"cs = {cs.rate:.9g}",
                f"d_excess = {cs.loss - report.loss:.9g}",
                f"d_asymptote = {analytics.excess_rate_asymptote(params.gamma_e, attack):.9g}",
            ]
        if args.mc_samples:
            cs_mc, rs_mc = estimate_rates(params, attack, args.mc_samples, args.seed)
            lines += [
                f"cs_mc = {cs_mc.mean:.9g} +/- {cs_mc.stderr:.3g}",
                f"rs_mc = {rs_mc.mean:.9g} +/- {rs_mc.stderr:.3g}",
            ]
        if report.anomalous:
            lines.append("warning = negative average rate (numerical anomaly)")
    except (ArithmeticError, ValueError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    print("\n".join(lines))
    return EXIT_OK


def _selftest(args):
    results = selftest.run()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_SELFTEST


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    handler = {"sweep": _sweep, "point": _point, "selftest": _selftest}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
