"""Command-line front end.

Exit codes: 0 sector accepted, 2 usage or parse error, 3 field of view
exhausted without acceptance, 4 field of view exceeds the outcome rank.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .campaign import DEMOS, SEED_SCHEME, CampaignConfig, build_campaign, build_state, demo_config, subset_campaign
from .errors import OutsideFovError
from .extraction import run_psep
from .formats import (
    FormatError,
    dumps,
    levels_csv,
    load_measurement,
    load_record,
    load_state,
    report_csv,
    report_to_dict,
    save_measurement,
    save_record,
    write_text,
)
from .measurement import born_probabilities, identity_measurement, random_measurement
from .simulate import sample_frequencies

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FOV_EXHAUSTED = 3
EXIT_RANK = 4

# flag dests that map onto CampaignConfig fields
_CAMPAIGN_FLAGS = ("alpha", "n_events", "n_sets", "outcomes", "fov_dim", "seed", "data_mode", "out_dir", "order",
                   "cat_alpha", "components", "angles")


class UsageError(Exception):
    pass


def count(text: str) -> int:
    """Parse a positive-or-zero integer that may be written as ``1e9``."""
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _components(text):
    try:
        pairs = [item.split(":") for item in text.split(",") if item.strip()]
        return [[int(level), float(w)] for level, w in pairs]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected level:weight,... got {text!r}")


def _angles(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated angles, got {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected exactly three angles")
    return vals


def _add_campaign_flags(p, with_state=False):
    p.add_argument("--alpha", type=float, help="significance level (default 0.05)")
    p.add_argument("--n-events", type=count, help="detection events per data set, e.g. 1e7")
    p.add_argument("--n-sets", type=count, help="number of measurement sets")
    p.add_argument("--outcomes", type=count, help="outcomes per measurement set")
    p.add_argument("--fov-dim", type=count, help="number of modeled basis levels")
    p.add_argument("--seed", type=int, help="master seed")
    p.add_argument("--data-mode", choices=("fresh", "shared-subsets"))
    p.add_argument("--order", choices=("hint", "default"), help="level ordering used for the extraction")
    p.add_argument("--out-dir", help="directory for report.json, report.csv, levels.csv")
    p.add_argument("--config", type=Path, help="JSON campaign config; flags override its values")
    if with_state:
        p.add_argument("--cat-alpha", type=float, help="coherent amplitude of the cat state")
        p.add_argument("--components", type=_components, help="mixture as level:weight,...")
        p.add_argument("--angles", type=_angles, help="hybrid wave-plate angles t1,t2,t3 in radians")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="physector", description="Extract the physical sector of a quantum state.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="run a preconfigured simulation campaign")
    demo.add_argument("name", choices=sorted(DEMOS))
    _add_campaign_flags(demo, with_state=True)

    extract = sub.add_parser("extract", help="run the extraction on measured counts")
    extract.add_argument("--measurement", type=Path, required=True, help="measurement JSON or CSV")
    extract.add_argument("--counts", type=Path, required=True, help="counts JSON")
    extract.add_argument("--alpha", type=float, default=0.05)
    extract.add_argument("--fov-dim", type=count, help="use levels 0..fov_dim-1 (default: largest within rank)")
    extract.add_argument("--n-sets", type=count, help="analyze this many random outcome subsets of the same counts")
    extract.add_argument("--outcomes", type=count, help="outcomes per subset (with --n-sets)")
    extract.add_argument("--seed", type=int, default=1, help="seed for subset selection")
    extract.add_argument("--order", choices=("hint", "default"), default="hint")
    extract.add_argument("--out-dir", default=".")

    sim = sub.add_parser("simulate", help="simulate a counts file")
    sim.add_argument("--state", default="cat", help="cat | mixture | hybrid | path to a state JSON")
    sim.add_argument("--measurement", default="random", help="identity | random | path to a measurement file")
    sim.add_argument("--fov-dim", type=count, help="number of modeled levels")
    sim.add_argument("--outcomes", type=count, default=40, help="outcomes of a random measurement")
    sim.add_argument("--n-events", type=count, default=10**6)
    sim.add_argument("--seed", type=int, default=1)
    sim.add_argument("--cat-alpha", type=float)
    sim.add_argument("--components", type=_components)
    sim.add_argument("--angles", type=_angles)
    sim.add_argument("--out-dir", default=".")
    return parser


def _load_config_file(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    return data


def _emit_report(report, out_dir, **extra):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_text(out / "report.json", dumps(report_to_dict(report, **extra)))
    write_text(out / "report.csv", report_csv(report))
    write_text(out / "levels.csv", levels_csv(report))
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    sector = "{" + ", ".join(map(str, report.extracted_sector or ())) + "}"
    print(f"status: {report.status}")
    print(f"extracted sector: {sector} (d_phys = {report.d_phys}) at alpha = {report.alpha}")
    print(f"sorted order: {' '.join(map(str, report.sorted_order))}")
    return EXIT_OK if report.status == "accepted" else EXIT_FOV_EXHAUSTED


def cmd_demo(args) -> int:
    overrides = _load_config_file(args.config) if args.config else {}
    for name in _CAMPAIGN_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = value
    try:
        config = demo_config(args.name, **overrides)
        config.check()
        m_sets, records = build_campaign(config)
    except (TypeError, ValueError, FormatError) as exc:
        raise UsageError(str(exc))
    report = run_psep(m_sets, records, config.alpha, order=config.order)
    recorded = config.to_dict()
    del recorded["out_dir"]  # keeps report.json identical wherever it is written
    return _emit_report(report, config.out_dir, demo=args.name, config=recorded, seed_scheme=SEED_SCHEME)


def cmd_extract(args) -> int:
    try:
        m = load_measurement(args.measurement)
        record = load_record(args.counts)
    except FormatError as exc:
        raise UsageError(str(exc))
    if record.n_outcomes != m.n_outcomes:
        raise UsageError(f"counts file has {record.n_outcomes} entries but the measurement has {m.n_outcomes} outcomes")
    if not 0 < args.alpha < 1:
        raise UsageError("alpha must lie in (0, 1)")
    if args.n_sets:
        n_out = args.outcomes or m.n_outcomes
        if n_out > m.n_outcomes or n_out < 1:
            raise UsageError(f"--outcomes must be between 1 and {m.n_outcomes}")
        m_sets, records = subset_campaign(m, record, args.n_sets, n_out, args.seed)
    else:
        m_sets, records = [m], [record]
    fov = None
    if args.fov_dim is not None:
        if not 1 <= args.fov_dim <= m.n_levels:
            raise UsageError(f"--fov-dim must be between 1 and {m.n_levels}")
        fov = range(args.fov_dim)
    report = run_psep(m_sets, records, args.alpha, fov=fov, order=args.order)
    extra = {"inputs": {"measurement": str(args.measurement), "counts": str(args.counts)}}
    if args.n_sets:
        extra["seed_scheme"] = SEED_SCHEME
        extra["subset_seed"] = args.seed
    return _emit_report(report, args.out_dir, **extra)


def cmd_simulate(args) -> int:
    state_overrides = {
        k: v
        for k, v in (("cat_alpha", args.cat_alpha), ("components", args.components), ("angles", args.angles))
        if v is not None
    }
    meas_spec = args.measurement
    try:
        m = None
        if meas_spec not in ("identity", "random"):
            m = load_measurement(meas_spec)
        if args.fov_dim is not None:
            d = args.fov_dim
        elif m is not None:
            d = m.n_levels
        elif args.state == "hybrid":
            d = 4
        elif args.state in ("cat", "mixture"):
            d = 30
        else:
            d = None
        if d is None:
            d = load_state(args.state).n_levels
        config = CampaignConfig(state=args.state, fov_dim=d, **state_overrides)
        state = build_state(config)
        if m is None:
            m = identity_measurement(d) if meas_spec == "identity" else random_measurement(d, args.outcomes, args.seed)
        p = born_probabilities(m, state)
        record = sample_frequencies(p, args.n_events, args.seed)
    except (TypeError, ValueError, IndexError, FormatError) as exc:
        raise UsageError(str(exc))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_record(record, out / "counts.json")
    if meas_spec in ("identity", "random"):
        save_measurement(m, out / "measurement.json")
    print(f"wrote {out / 'counts.json'} ({record.n_events} events, {int(record.counts.sum())} recorded)")
    return EXIT_OK


COMMANDS = {"demo": cmd_demo, "extract": cmd_extract, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutsideFovError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANK


if __name__ == "__main__":
    sys.exit(main())
