"""Command line interface: ``aircomp {sweep,bounds,train,selftest}``."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import feel, harness, nested
from .balanced import BalancedConfig
from .bounds import exact_pe_balanced, upper_pe_balanced, upper_pe_nested, upper_pe_nested_unit
from .channel import snr_to_noise_power
from .lattice import hexagonal_lattice
from .selftest import run_selftest


def _floats(text: str) -> list:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list:
    return [int(t) for t in text.split(",") if t.strip()]


def load_config_file(path) -> dict:
    """Read ``key=value`` lines; ``#`` starts a comment, dashes in keys become underscores."""
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.lstrip("-").replace("-", "_")] = value
    return values


def _add_code_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, default=25, help="quantization levels (odd)")
    p.add_argument("--beta", type=int, default=5, help="balanced numeral base (odd)")
    p.add_argument("--digits", type=int, default=2, help="channel uses per entry, balanced code")
    p.add_argument("--power", type=float, default=1.0, help="per-device power P_X")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--mmse-mode", choices=("mmse", "unit"), default="mmse",
                   help="nested receiver scale")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--config", help="key=value file with defaults for these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aircomp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="Monte-Carlo error rates versus number of devices")
    sw.add_argument("--snr-db", type=_floats, default=[2.0, 2.35])
    sw.add_argument("--devices", type=_ints, default=[1, 2, 3, 4, 5])
    sw.add_argument("--samples", type=int, default=100_000)
    sw.add_argument("--generators", type=int, default=20)
    sw.add_argument("--scheme", choices=("both", "nested", "balanced"), default="both")
    sw.add_argument("--dmax", type=int, default=3)
    sw.add_argument("--prime", type=int, default=None, help="fixed field size for every K")
    sw.add_argument("--random-messages", action="store_true")
    sw.add_argument("--bounds", action="store_true", help="append bound columns to the CSV")
    sw.add_argument("--out", help="CSV path; several SNRs get an _SNR_<x.xx> suffix")
    _add_code_flags(sw)

    bd = sub.add_parser("bounds", help="tabulate error probabilities and bounds")
    bd.add_argument("--snr-db", type=_floats, default=[2.0])
    bd.add_argument("--devices", type=_ints, default=[5])
    bd.add_argument("--entries", type=int, default=1, help="gradient entries k")
    bd.add_argument("--dmax", type=int, default=3)
    bd.add_argument("--prime", type=int, default=None)
    _add_code_flags(bd)

    tr = sub.add_parser("train", help="toy federated training over the coded channel")
    tr.add_argument("--rounds", type=int, default=100)
    tr.add_argument("--clients", type=int, default=5)
    tr.add_argument("--dim", type=int, default=8)
    tr.add_argument("--lr", type=float, default=0.1)
    tr.add_argument("--gb", type=float, default=1.0, help="gradient clipping bound")
    tr.add_argument("--scheme", choices=feel.TRAIN_SCHEMES, default="balanced")
    tr.add_argument("--snr-db", type=float, default=20.0)
    tr.add_argument("--baseline", action="store_true", help="also run the error-free baseline")
    tr.add_argument("--out", help="CSV of Round,Loss,Scheme")
    _add_code_flags(tr)

    sub.add_parser("selftest", help="run the brute-force cross-checks")
    return parser


def _parse(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        defaults = load_config_file(args.config)
        known = {a.dest: a for a in sub._actions}
        for key, raw in defaults.items():
            if key not in known or key == "config":
                raise ValueError(f"unknown config key {key!r}")
            action = known[key]
            if action.type is not None:
                defaults[key] = action.type(raw)
            elif isinstance(action, argparse._StoreTrueAction):
                defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _sweep(args) -> int:
    schemes = harness.SCHEMES if args.scheme == "both" else (args.scheme,)
    cfg = harness.SweepConfig(
        snr_db_list=args.snr_db, devices_list=args.devices, samples=args.samples,
        generators=args.generators, levels=args.q, base=args.beta, digits=args.digits,
        power=args.power, seed=args.seed, schemes=schemes, mmse=args.mmse_mode == "mmse",
        noiseless=args.noiseless, dmax=args.dmax, prime=args.prime,
        random_messages=args.random_messages,
    )
    BalancedConfig(cfg.base, cfg.digits, cfg.power, cfg.levels)
    result = harness.run_sweep(cfg)
    print(f"{'SNR_dB':>7} {'K':>3} {'p':>5} {'Median_Nested':>14} {'Min_Nested':>11} "
          f"{'Max_Nested':>11} {'Balanced':>10} {'Exact_Bal':>10}")
    for row in result.rows:
        med, lo, hi = row.nested_summary()
        bal = row.balanced_summary()[0]
        print(f"{row.snr_db:7.2f} {row.num_devices:3d} {row.prime:5d} {med:14.6g} {lo:11.6g} "
              f"{hi:11.6g} {bal:10.6g} {row.exact_balanced:10.6g}")
    if args.out:
        for snr, path in harness.csv_paths(args.out, cfg.snr_db_list).items():
            harness.emit_csv(result, path, snr, bounds=args.bounds)
            print(f"wrote {path}")
    print(f"elapsed {result.elapsed:.1f}s")
    return 0


def _bounds(args) -> int:
    bcfg = BalancedConfig(args.beta, args.digits, args.power, args.q)
    shaping, stats = hexagonal_lattice(args.power)
    n = shaping.dimension
    print(f"{'SNR_dB':>7} {'K':>3} {'p':>5} {'balanced_exact':>15} {'balanced_bound':>15} "
          f"{'nested_mmse':>12} {'nested_unit':>12}")
    for snr in args.snr_db:
        pn = 0.0 if args.noiseless else snr_to_noise_power(snr, args.power)
        for k in args.devices:
            p = args.prime or nested.smallest_prime_above(k * (args.q - 1))
            nested.validate_prime(p, k, args.q)
            scale = k * args.power / (pn + k * args.power)
            if args.mmse_mode == "unit":
                scale = 1.0
            vals = (
                exact_pe_balanced(bcfg, pn, args.entries, args.dmax),
                upper_pe_balanced(args.q, args.digits, args.power, pn, args.entries),
                upper_pe_nested(stats, n, p, k, scale, args.power, pn),
                upper_pe_nested_unit(stats, n, p, pn),
            )
            print(f"{snr:7.2f} {k:3d} {p:5d} " + " ".join(f"{v:15.6g}" if i < 2 else f"{v:12.6g}"
                                                          for i, v in enumerate(vals)))
    return 0


def _train(args) -> int:
    cfg = feel.TrainConfig(
        dim=args.dim, clients=args.clients, rounds=args.rounds, lr=args.lr, clip=args.gb,
        scheme=args.scheme, snr_db=args.snr_db, levels=args.q, base=args.beta,
        digits=args.digits, power=args.power, mmse=args.mmse_mode == "mmse",
        noiseless=args.noiseless, seed=args.seed,
    )
    result = feel.train(cfg, args.out)
    print(f"scheme={cfg.scheme} initial_loss={result.losses[0]:.6g} final_loss={result.losses[-1]:.6g}")
    if args.baseline and cfg.scheme != "ideal":
        base = feel.train(replace(cfg, scheme="ideal"))
        print(f"scheme=ideal final_loss={base.losses[-1]:.6g} "
              f"ratio={result.losses[-1] / base.losses[-1]:.4f}")
    if args.out:
        print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse(parser, argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    handlers = {"sweep": _sweep, "bounds": _bounds, "train": _train,
                "selftest": lambda a: 0 if run_selftest() else 1}
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
