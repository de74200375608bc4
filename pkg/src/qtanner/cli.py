"""Command-line interface.

Subcommands: construct, fixture, check, distance, spectra, simulate,
threshold, overhead, sweep.  ``--config FILE`` loads a JSON object of
flat dotted keys mirroring the flags (e.g. ``{"bp.alpha": 0.5,
"osd.order": 9, "simulate.shots": 20000}``); explicit flags win over
the config file.  The default output directory comes from the
``QTANNER_OUTPUT_DIR`` environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .codes import build_pair, random_systematic
from .complexes import build_complex
from .decoder import DecoderConfig
from .distance import estimate_distance
from .groups import DihedralGroup, GeneratorSet, sample_tnc_pair
from .harness import (
    MemoryRunner,
    append_results_csv,
    default_output_dir,
    overhead,
    pseudo_threshold,
    sweep_table2,
)
from .noise import NoiseModel
from .qcode import build_tanner_code, fixture_names, load_bundle, load_fixture, parameters, save_bundle

MODEL_NAMES = {
    "capacity": "code-capacity",
    "phenom": "phenomenological",
    "circuit": "circuit",
}


def _decoder_config(args) -> DecoderConfig:
    return DecoderConfig(
        alpha=args.bp_alpha,
        max_iters=args.bp_max_iters,
        osd_order=args.osd_order,
        osd_strategy=args.osd_strategy,
    )


def _add_decoder_flags(p: argparse.ArgumentParser):
    p.add_argument("--bp-alpha", type=float, default=0.625, help="min-sum scale")
    p.add_argument(
        "--bp-max-iters",
        type=int,
        default=100,
        help="BP iteration cap (default 100 for experiments)",
    )
    p.add_argument("--osd-order", type=int, default=9)
    p.add_argument(
        "--osd-strategy", choices=["combination-sweep", "order-0"], default="combination-sweep"
    )


def _load_code(args):
    if getattr(args, "fixture", None):
        return load_fixture(args.fixture), args.fixture
    if getattr(args, "bundle", None):
        code = load_bundle(args.bundle)
        return code, code.provenance.get("fixture", Path(args.bundle).name)
    raise SystemExit("either --fixture or --bundle is required")


def _add_code_source(p: argparse.ArgumentParser):
    p.add_argument("--fixture", choices=fixture_names())
    p.add_argument("--bundle", help="path to a code bundle directory")


def cmd_construct(args):
    group = DihedralGroup(args.group)
    rng = np.random.default_rng(args.seed)
    gen_a, gen_b = sample_tnc_pair(group, args.delta, rng, max_retries=args.max_retries)
    ka = args.ka or max(1, args.delta // 3)
    ca = random_systematic(ka, args.delta, rng)
    cb = random_systematic(args.delta - ka, args.delta, rng)
    code = build_tanner_code(
        build_complex(group, gen_a, gen_b),
        build_pair(ca, cb),
        provenance={"seed": args.seed},
    )
    out = Path(args.out or default_output_dir() / f"d{args.group}-{code.n}")
    save_bundle(code, out)
    print(json.dumps(parameters(code), indent=2))
    print(f"bundle written to {out}")


def cmd_fixture(args):
    code = load_fixture(args.name)
    out = Path(args.out or default_output_dir() / args.name)
    save_bundle(code, out)
    print(json.dumps(parameters(code), indent=2))
    print(f"bundle written to {out}")


def cmd_check(args):
    code = load_bundle(args.bundle)
    report = {
        "parameters": parameters(code),
        "orthogonal": code.hx.matmul(code.hz.transpose()).is_zero(),
    }
    try:
        code.validate()
        report["valid"] = True
    except Exception as exc:  # surfaced in the report, not swallowed
        report["valid"] = False
        report["error"] = str(exc)
    prov = code.provenance
    if "group_order" in prov:
        report["qubit_count_formula"] = (
            code.n == prov["delta"] ** 2 * prov["group_order"] // 2
        )
    print(json.dumps(report, indent=2))
    if not report["valid"]:
        raise SystemExit(1)


def cmd_distance(args):
    code, _ = _load_code(args)
    est = estimate_distance(code, trials=args.trials, seed=args.seed)
    print(est.to_json())


def cmd_spectra(args):
    code, _ = _load_code(args)
    prov = code.provenance
    group = DihedralGroup(prov["group_order"] // 2)
    gen_a = GeneratorSet.from_names(group, prov["generators_a"])
    gen_b = GeneratorSet.from_names(group, prov["generators_b"])
    print(build_complex(group, gen_a, gen_b).summary_json())


def cmd_simulate(args):
    code, code_id = _load_code(args)
    noise = NoiseModel(
        MODEL_NAMES[args.model], args.p, args.rounds, gate_noise=args.gate_noise
    )
    runner = MemoryRunner(code, code_id)
    if args.adaptive:
        res = runner.run_adaptive(
            noise,
            seed=args.seed,
            config=_decoder_config(args),
            min_failures=args.min_failures,
            max_shots=args.shots,
        )
    else:
        res = runner.run(noise, args.shots, args.seed, _decoder_config(args))
    out = Path(args.out or default_output_dir() / "results.csv")
    append_results_csv(out, [res])
    print(
        json.dumps(
            {
                "code": res.code_id,
                "model": res.model,
                "p": res.p,
                "rounds": res.rounds,
                "L_X": res.l_x,
                "L_Z": res.l_z,
                "p_L": res.p_l,
                "ci": res.ci,
                "shots": res.shots_x + res.shots_z,
                "seconds": round(res.seconds, 2),
                "csv": str(out),
            },
            indent=2,
        )
    )


def cmd_threshold(args):
    code, code_id = _load_code(args)
    res = pseudo_threshold(
        code,
        MODEL_NAMES[args.model],
        rounds=args.rounds,
        bracket=(args.lo, args.hi),
        seed=args.seed,
        config=_decoder_config(args),
        min_failures=args.min_failures,
        max_shots=args.shots,
        code_id=code_id,
    )
    print(res.to_json())


def cmd_overhead(args):
    code, _ = _load_code(args)
    print(json.dumps(overhead(code, rounds=args.rounds), indent=2))


def cmd_sweep(args):
    targets = []
    for item in args.targets.split(","):
        da, db = item.split(":")
        targets.append((int(da), int(db)))
    cells = sweep_table2(
        [int(g) for g in args.groups.split(",")],
        [int(d) for d in args.deltas.split(",")],
        targets,
        instances=args.instances,
        seed=args.seed,
        trials=args.trials,
    )
    rows = [
        {"delta": delta, "d_a": da, "d_b": db, "best_d": best}
        for (delta, da, db), best in sorted(cells.items())
    ]
    print(json.dumps(rows, indent=2))
    if args.out:
        import csv as _csv

        path = Path(args.out)
        new = not path.exists()
        with path.open("a", newline="") as fh:
            w = _csv.writer(fh)
            if new:
                w.writerow(["delta", "d_a", "d_b", "best_d"])
            for r in rows:
                w.writerow([r["delta"], r["d_a"], r["d_b"], r["best_d"]])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qtanner",
        description="Quantum Tanner codes: construction, validation, decoding experiments",
    )
    parser.add_argument("--config", help="JSON file of flat dotted flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="random instance from a dihedral group")
    p.add_argument("--group", type=int, required=True, help="n for D_n (order 2n)")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--ka", type=int, help="seed-code dimension (default delta//3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-retries", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("fixture", help="rebuild a bundled reference instance")
    p.add_argument("name", choices=fixture_names())
    p.add_argument("--out")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("check", help="re-verify a code bundle's invariants")
    p.add_argument("bundle")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("distance", help="randomized distance upper bound")
    _add_code_source(p)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("spectra", help="Cayley/complex eigenvalue report")
    _add_code_source(p)
    p.set_defaults(func=cmd_spectra)

    p = sub.add_parser("simulate", help="memory experiment Monte Carlo")
    _add_code_source(p)
    p.add_argument("--model", choices=list(MODEL_NAMES), required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--adaptive", action="store_true")
    p.add_argument("--min-failures", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gate-noise", choices=["paired", "split"], default="paired")
    p.add_argument("--out", help="CSV results path (appended)")
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("threshold", help="break-even physical rate search")
    _add_code_source(p)
    p.add_argument("--model", choices=["phenom", "circuit"], required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--shots", type=int, default=200_000)
    p.add_argument("--min-failures", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    _add_decoder_flags(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("overhead", help="space-time overhead report")
    _add_code_source(p)
    p.add_argument("--rounds", type=int, required=True)
    p.set_defaults(func=cmd_overhead)

    p = sub.add_parser("sweep", help="max distance per (delta, d_A, d_B) cell")
    p.add_argument("--groups", default="4,6,8,10", help="comma-separated n for D_n")
    p.add_argument("--deltas", default="3")
    p.add_argument("--targets", default="2:2", help="comma-separated dA:dB pairs")
    p.add_argument("--instances", type=int, default=10)
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="CSV path for sweep rows")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, _ = parser.parse_known_args(argv)
    if args.config:
        config = json.loads(Path(args.config).read_text())
        flat = {k.replace(".", "_").replace("-", "_"): v for k, v in config.items()}
        # Re-parse with config values as defaults; explicit flags still win.
        parser2 = build_parser()
        for action in parser2._subparsers._group_actions[0].choices.values():  # type: ignore[union-attr]
            known = {a.dest for a in action._actions}
            action.set_defaults(**{k: v for k, v in flat.items() if k in known})
        args = parser2.parse_args(argv)
    else:
        args = parser.parse_args(argv)
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
