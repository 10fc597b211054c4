"""Command line interface.

Subcommands:

  run         execute the protocol, write report.json / histogram.csv / PNGs
  two-party   direct comparison between two millionaires
  attack      channel attack experiments with detection and leakage figures
  efficiency  resource-count table and curve
  verify      cross-check the dense simulator against the factored sampler

Exit codes: 0 success, 1 bad configuration or usage, 2 protocol abort,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from qpec.attacks import (
    ATTACK_KINDS,
    AttackModel,
    attack_experiment,
    decoy_detection_experiment,
    leakage_experiment,
)
from qpec.bits import BitVector
from qpec.protocol import ComparisonReport, ConfigError, ProtocolConfig, run_protocol
from qpec.qsim import MeasurementOutcome, sample_factored, verify_oracle_equivalence
from qpec.report import histogram_rows, render_summary, report_to_json, write_histogram_csv
from qpec.rng import fresh_seed, stream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ABORT = 2
EXIT_VERIFY = 3


def _bitvector(text: str) -> BitVector:
    try:
        return BitVector.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpec",
        description="GHZ3-triplet private equality comparison simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute one full protocol run")
    run.add_argument("--config", type=Path, help="JSON config file")
    run.add_argument("--n", type=int, help="number of millionaires")
    run.add_argument("--m", type=int, help="register width in bits")
    run.add_argument("--seed", type=int, help="master seed (default: fresh entropy)")
    run.add_argument("--fortunes", help="comma-separated bit strings, one per party")
    run.add_argument("--secret", type=_bitvector, help="broker secret (default: random)")
    run.add_argument("--decoy-rate", type=float, dest="decoy_rate")
    run.add_argument("--attack", choices=ATTACK_KINDS, help="channel attack to apply")
    run.add_argument("--threads", type=int, default=1)
    run.add_argument("--trials", type=int, default=0,
                     help="extra histogram-only resamples of each circuit")
    run.add_argument("--out", default="out", help="output directory (default ./out)")

    two = sub.add_parser("two-party", help="compare two fortunes directly")
    two.add_argument("--fa", type=_bitvector, help="first fortune")
    two.add_argument("--fb", type=_bitvector, help="second fortune")
    two.add_argument("--random", action="store_true", help="draw both fortunes at random")
    two.add_argument("--m", type=int, help="register width for --random")
    two.add_argument("--seed", type=int)
    two.add_argument("--out", default="out")

    atk = sub.add_parser("attack", help="attack experiments")
    atk.add_argument("--kind", default="all",
                     choices=("all",) + tuple(k for k in ATTACK_KINDS if k != "none"))
    atk.add_argument("--decoys", type=int, default=20000)
    atk.add_argument("--trials", type=int, default=1000)
    atk.add_argument("--n", type=int, default=2)
    atk.add_argument("--m", type=int, default=2)
    atk.add_argument("--seed", type=int, default=0)
    atk.add_argument("--out", default="out")

    eff = sub.add_parser("efficiency", help="resource counts and curve")
    eff.add_argument("--n", type=int, default=3)
    eff.add_argument("--m-max", type=int, default=64, dest="m_max")
    eff.add_argument("--out", default="out")

    ver = sub.add_parser("verify", help="dense path vs factored sampler cross-check")
    ver.add_argument("--max-m", type=int, default=3, dest="max_m")
    ver.add_argument("--tol", type=float, default=1e-9)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    return parser


# ---------------------------------------------------------------------------
# run


def _load_run_config(args) -> ProtocolConfig:
    if args.config is not None:
        cfg = ProtocolConfig.from_file(args.config)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.decoy_rate is not None:
            overrides["decoy_rate"] = args.decoy_rate
        if args.attack is not None:
            overrides["attack"] = AttackModel(kind=args.attack)
        if args.n is not None or args.m is not None:
            raise ConfigError("--n/--m cannot override a config file")
        if overrides:
            data = {**cfg.__dict__, **overrides}
            cfg = ProtocolConfig(**data)
        return cfg
    if args.n is None or args.m is None:
        raise ConfigError("either --config or both --n and --m are required")
    fortunes = None
    if args.fortunes:
        fortunes = [BitVector.from_string(t.strip()) for t in args.fortunes.split(",")]
    return ProtocolConfig(
        n=args.n,
        m=args.m,
        seed=args.seed if args.seed is not None else fresh_seed(),
        decoy_rate=args.decoy_rate if args.decoy_rate is not None else 0.25,
        attack=AttackModel(kind=args.attack) if args.attack else AttackModel(),
        fortunes=fortunes,
        sophia_secret=args.secret,
    )


def _histogram_outcomes(config: ProtocolConfig, report: ComparisonReport, trials: int):
    """Outcomes feeding the histogram: the run itself plus optional resamples.

    Resampling reruns only the final measurement statistics of each circuit
    under the same secrets; verdicts are untouched.
    """
    outcomes = list(report.outcomes)
    if trials <= 0:
        return outcomes
    fortunes = config.fortunes
    secret = report.trent_sums[0] ^ fortunes[0] if report.trent_sums else None
    for i, f in enumerate(fortunes):
        s_eff = fortunes[0] if config.two_party_mode else secret
        f_eff = fortunes[1] if config.two_party_mode else f
        y2s, y1s, y0s = sample_factored(
            config.m, s_eff, f_eff, trials, stream(config.seed, "histogram", i)
        )
        outcomes.extend(
            MeasurementOutcome(
                BitVector(int(a), config.m),
                BitVector(int(b), config.m),
                BitVector(int(c), config.m),
            )
            for a, b, c in zip(y2s, y1s, y0s)
        )
        if config.two_party_mode:
            break
    return outcomes


def _write_run_outputs(config, report, out: Path, trials: int) -> None:
    (out / "report.json").write_text(report_to_json(report))
    print(render_summary(report))
    if report.aborted:
        return
    rows = histogram_rows(_histogram_outcomes(config, report, trials))
    write_histogram_csv(rows, out / "histogram.csv")
    from qpec.figures import render_histogram

    render_histogram(rows, out / "histogram.png")
    print(f"wrote {out / 'report.json'}, {out / 'histogram.csv'}, {out / 'histogram.png'}")


def _cmd_run(args) -> int:
    config = _load_run_config(args)
    if config.fortunes is None:
        gen = stream(config.seed, "cli-fortunes")
        config.fortunes = [BitVector.random(config.m, gen) for _ in range(config.n)]
        print("fortunes not supplied; drew random ones (kept out of the report)")
    out = _out_dir(args.out)
    report = run_protocol(config, threads=args.threads)
    _write_run_outputs(config, report, out, args.trials)
    return EXIT_ABORT if report.aborted else EXIT_OK


def _cmd_two_party(args) -> int:
    if args.random == (args.fa is not None or args.fb is not None):
        raise ConfigError("give either --fa and --fb, or --random with --m")
    seed = args.seed if args.seed is not None else fresh_seed()
    if args.random:
        if args.m is None:
            raise ConfigError("--random needs --m")
        gen = stream(seed, "cli-two-party")
        fa, fb = BitVector.random(args.m, gen), BitVector.random(args.m, gen)
    else:
        if args.fa is None or args.fb is None:
            raise ConfigError("both --fa and --fb are required")
        fa, fb = args.fa, args.fb
    config = ProtocolConfig(
        n=2, m=fa.length, seed=seed, two_party_mode=True, fortunes=[fa, fb]
    )
    out = _out_dir(args.out)
    report = run_protocol(config)
    (out / "report.json").write_text(report_to_json(report))
    print(render_summary(report))
    if report.aborted:
        return EXIT_ABORT
    verdict = report.verdicts[0]
    print(f"fortunes {'match' if verdict.equal else 'differ'}")
    print(f"wrote {out / 'report.json'}")
    return EXIT_OK


def _cmd_attack(args) -> int:
    kinds = (
        [k for k in ATTACK_KINDS if k != "none"] if args.kind == "all" else [args.kind]
    )
    out = _out_dir(args.out)
    detection_results = []
    all_results = {}
    for kind in kinds:
        model = AttackModel(kind=kind)
        det = decoy_detection_experiment(model, num_decoys=args.decoys, seed=args.seed)
        leak = leakage_experiment(model, m=args.m, trials=args.trials, seed=args.seed)
        full = attack_experiment(
            model, n=args.n, m=args.m, trials=max(50, args.trials // 10), seed=args.seed
        )
        detection_results.append(det)
        all_results[kind] = {
            "detection": det,
            "leakage": {
                "residual_counts": leak["residual_counts"].tolist(),
                "chi2_stat": leak["chi2_stat"],
                "chi2_dof": leak["chi2_dof"],
                "mi_bits": leak["mi_bits"],
            },
            "protocol": full,
        }
        print(
            f"{kind:18s} detection={det['detection_rate']:.4f} "
            f"mi={leak['mi_bits']:.4f} bits "
            f"verdict_errors={full['verdict_error_rate']:.3f}"
        )
        from qpec.figures import render_residual_flatness

        render_residual_flatness(
            leak["residual_counts"].tolist(), out / f"residuals_{kind}.png", kind
        )
    (out / "attack.json").write_text(json.dumps(all_results, indent=2, sort_keys=True) + "\n")
    from qpec.figures import render_detection_rates

    render_detection_rates(detection_results, out / "detection_rates.png")
    print(f"wrote {out / 'attack.json'}, {out / 'detection_rates.png'}")
    return EXIT_OK


def _cmd_efficiency(args) -> int:
    from qpec.figures import render_efficiency_curve
    from qpec.report import compute_efficiency

    out = _out_dir(args.out)
    lines = ["m,eta_cb,eta_tq,eta"]
    print(f"{'m':>6} {'eta_cb':>8} {'eta_tq':>8} {'eta':>10}")
    for m in range(1, args.m_max + 1):
        e = compute_efficiency(args.n, m)
        lines.append(f"{m},{e.eta_cb},{e.eta_tq},{e.eta}")
        if m <= 10 or m == args.m_max:
            print(f"{m:>6} {e.eta_cb:>8} {e.eta_tq:>8} {str(e.eta):>10} = {float(e.eta):.4f}")
    (out / "efficiency.csv").write_text("\n".join(lines) + "\n")
    render_efficiency_curve(out / "efficiency.png", m_max=args.m_max, n=args.n)
    print(f"limit: 1/3 as m grows")
    print(f"wrote {out / 'efficiency.csv'}, {out / 'efficiency.png'}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    factored = None
    if args.inject_fault:
        from qpec.qsim import factored_distribution

        def factored(m, s, f):
            # deliberately corrupt the reference by flipping the parity target
            return factored_distribution(m, s ^ BitVector(1, m), f)

    kwargs = {} if factored is None else {"factored": factored}
    failures = verify_oracle_equivalence(
        max_m=args.max_m, tol=args.tol, seed=args.seed, **kwargs
    )
    if failures:
        for note in failures:
            print(f"FAIL {note}", file=sys.stderr)
        print(f"{len(failures)} distribution mismatches", file=sys.stderr)
        return EXIT_VERIFY
    print(f"dense path and factored sampler agree up to m={args.max_m} (tol {args.tol})")
    return EXIT_OK


_COMMANDS = {
    "run": _cmd_run,
    "two-party": _cmd_two_party,
    "attack": _cmd_attack,
    "efficiency": _cmd_efficiency,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
