"""Command-line front door: run sessions, print exact tables, probe the photonic model.

Subcommands: run | analyze | photon | equivalence.  Configuration comes from
an optional key = value file plus repeatable --set overrides; a seed is
mandatory everywhere so every emitted artifact is reproducible byte for byte.
Exit codes: 0 success, 1 usage or configuration error, 2 I/O error.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, analytics
from .analytics import cross_dimension_comparison, oracle_strategy_table, per_photon_information
from .eve import (KIND_INTERCEPT_RESEND, KIND_INTERMEDIATE, KIND_NONE,
                  EveStrategy, eve_empirical_stats, predicted_eve_info, predicted_qter)
from .photonic import (ALICE_SETTINGS, BOB_SETTINGS, PhaseSettings,
                       check_permutation, photonic_equivalence_check, routing_matrix)
from .protocol import (ProtocolConfig, config_to_dict, estimate_qter, run_session,
                       session_sampling_stream, sift, transcript_to_doc, transcript_to_lines)
from .qudit import LETTER_NAMES
from .reports import Report, Table, fmt, metrics_table, render

EVE_NAMES = {
    "none": KIND_NONE,
    "intercept-resend": KIND_INTERCEPT_RESEND,
    "intermediate": KIND_INTERMEDIATE,
}
EVE_NAMES_BY_KIND = {v: k for k, v in EVE_NAMES.items()}

DEFAULT_THRESHOLD = 0.15

CONFIG_KEYS = ("dim", "rounds", "eve", "fraction", "sample_fraction",
               "channel_flip_prob", "seed", "threshold", "bob_phases")


class ConfigError(Exception):
    pass


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunSpec:
    subcommand: str
    config: ProtocolConfig
    output_format: str
    out_path: str | None
    transcript_path: str | None
    transcript_format: str
    threshold: float
    bob_phases: PhaseSettings
    eve_explicit: bool


def parse_config_text(text: str, source: str = "<config>") -> dict[str, tuple[str, str]]:
    """Parse key = value lines into {key: (value, origin)}; '#' starts a comment."""
    raw: dict[str, tuple[str, str]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {line.strip()!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        origin = f"{source}:{lineno}"
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{origin}: unknown key {key!r}")
        raw[key] = (value, origin)
    return raw


def _coerce_int(key, value, origin, lo=None, hi=None):
    try:
        result = int(value)
    except ValueError:
        raise ConfigError(f"{origin}: {key} must be an integer, got {value!r}") from None
    if lo is not None and result < lo or hi is not None and result > hi:
        raise ConfigError(f"{origin}: {key} = {result} out of range")
    return result


def _coerce_float(key, value, origin):
    try:
        return float(value)
    except ValueError:
        raise ConfigError(f"{origin}: {key} must be a number, got {value!r}") from None


def build_spec(args) -> RunSpec:
    raw: dict[str, tuple[str, str]] = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError:
            raise
        raw.update(parse_config_text(text, source=args.config))
    for i, item in enumerate(args.set or (), start=1):
        if "=" not in item:
            raise ConfigError(f"--set[{i}]: expected key=value, got {item!r}")
        key, value = (part.strip() for part in item.split("=", 1))
        origin = f"--set[{i}]"
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{origin}: unknown key {key!r}")
        raw[key] = (value, origin)
    if args.seed is not None:
        raw["seed"] = (str(args.seed), "--seed")

    if "seed" not in raw:
        raise ConfigError("missing seed: set 'seed = N' in the config or pass --seed N")

    dim = _coerce_int("dim", *raw["dim"]) if "dim" in raw else 4
    rounds = _coerce_int("rounds", *raw["rounds"], lo=1) if "rounds" in raw else 100_000
    seed = _coerce_int("seed", *raw["seed"], lo=0)
    eve_explicit = "eve" in raw
    eve_name = raw["eve"][0] if eve_explicit else "none"
    if eve_name not in EVE_NAMES:
        origin = raw["eve"][1]
        raise ConfigError(f"{origin}: eve must be one of {', '.join(EVE_NAMES)}; got {eve_name!r}")
    fraction = _coerce_float("fraction", *raw["fraction"]) if "fraction" in raw else 1.0
    sample_fraction = (_coerce_float("sample_fraction", *raw["sample_fraction"])
                       if "sample_fraction" in raw else 0.5)
    flip = (_coerce_float("channel_flip_prob", *raw["channel_flip_prob"])
            if "channel_flip_prob" in raw else 0.0)
    threshold = (_coerce_float("threshold", *raw["threshold"])
                 if "threshold" in raw else DEFAULT_THRESHOLD)
    if "bob_phases" in raw:
        value, origin = raw["bob_phases"]
        parts = value.split(",")
        if len(parts) != 4:
            raise ConfigError(f"{origin}: bob_phases needs 4 comma-separated values")
        bob_phases = PhaseSettings(tuple(_coerce_float("bob_phases", p, origin) for p in parts))
    else:
        bob_phases = BOB_SETTINGS

    try:
        strategy = EveStrategy(kind=EVE_NAMES[eve_name], intercept_fraction=fraction)
        config = ProtocolConfig(dim=dim, rounds=rounds, seed=seed, eve=strategy,
                                sample_fraction=sample_fraction, channel_flip_prob=flip)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    return RunSpec(
        subcommand=args.subcommand,
        config=config,
        output_format=args.format,
        out_path=args.out,
        transcript_path=getattr(args, "transcript", None),
        transcript_format=getattr(args, "transcript_format", "lines"),
        threshold=threshold,
        bob_phases=bob_phases,
        eve_explicit=eve_explicit,
    )


def _header(spec: RunSpec) -> tuple:
    cfg = spec.config
    return (
        ("artifact", f"quartkd {__version__}"),
        ("subcommand", spec.subcommand),
        ("seed", str(cfg.seed)),
        ("dim", str(cfg.dim)),
        ("rounds", str(cfg.rounds)),
        ("eve", EVE_NAMES_BY_KIND[cfg.eve.kind]),
        ("fraction", fmt(cfg.eve.intercept_fraction)),
        ("sample_fraction", fmt(cfg.sample_fraction)),
        ("channel_flip_prob", fmt(cfg.channel_flip_prob)),
    )


def cmd_run(spec: RunSpec) -> Report:
    cfg = spec.config
    transcript = run_session(cfg)
    keys = sift(transcript)
    sifted = len(keys)
    qter_est, remaining = estimate_qter(keys, cfg.sample_fraction, session_sampling_stream(cfg))
    bits_per_symbol = per_photon_information(cfg.dim)
    entries = [
        ("sifted_symbols", sifted, "empirical"),
        ("sifted_fraction", sifted / cfg.rounds, "empirical"),
        ("qter_estimate", qter_est, "empirical"),
        ("qter_predicted", predicted_qter(cfg.eve, cfg.dim), "oracle"),
        ("key_symbols", len(remaining), "empirical"),
        ("bits_per_symbol", bits_per_symbol, "exact"),
        ("key_bits", len(remaining) * bits_per_symbol, "empirical"),
    ]
    if cfg.eve.kind != KIND_NONE and cfg.eve.intercept_fraction > 0:
        try:
            stats = eve_empirical_stats(transcript, keys)
            entries.append(("eve_letter_accuracy", stats.letter_accuracy, "empirical"))
            entries.append(("eve_info_estimate", stats.info_bits, "empirical"))
        except ValueError:
            pass   # interception fraction so low that no sifted round was touched
        entries.append(("eve_info_predicted", predicted_eve_info(cfg.eve, cfg.dim), "oracle"))
    entries.append(("qter_threshold", spec.threshold, "policy"))
    entries.append(("qter_above_threshold", qter_est > spec.threshold, "policy"))
    report = Report("session report", _header(spec), (metrics_table("metrics", entries),))

    if spec.transcript_path:
        if spec.transcript_format == "doc":
            payload = json.dumps(transcript_to_doc(transcript), indent=2) + "\n"
        else:
            payload = transcript_to_lines(transcript)
        Path(spec.transcript_path).write_text(payload)
    return report


def _strategy_table(dim: int) -> Table:
    rows = []
    for row in oracle_strategy_table(dim):
        rows.append((
            EVE_NAMES_BY_KIND[row.strategy],
            fmt(row.qter),
            fmt(float(row.qter)),
            fmt(row.eve_info_bits),
            "-" if row.eve_accuracy is None else fmt(row.eve_accuracy),
            "oracle",
            row.note,
        ))
    return Table(f"strategies_d{dim}",
                 ("strategy", "qter_exact", "qter", "eve_info_bits", "eve_accuracy",
                  "source", "note"),
                 tuple(rows))


def cmd_analyze(spec: RunSpec) -> Report:
    comparison = cross_dimension_comparison()
    cross_rows = tuple(
        (name, fmt(value), "exact")
        for name, value in comparison.items()
    )
    cross = Table("cross_dimension", ("quantity", "value_bits", "source"), cross_rows)
    return Report("strategy analysis", _header(spec),
                  (_strategy_table(2), _strategy_table(4), cross))


def cmd_photon(spec: RunSpec) -> Report:
    matrix = routing_matrix(bob_settings=spec.bob_phases)
    verdict = check_permutation(matrix)
    rows = tuple(
        (f"energy_{LETTER_NAMES[j]}",) + tuple(fmt(float(p)) for p in matrix[j])
        for j in range(4)
    )
    routing = Table("routing_matrix",
                    ("prepared",) + tuple(f"detector_{n}" for n in LETTER_NAMES), rows)
    entries = [
        ("bob_phases", ",".join(fmt(p) for p in spec.bob_phases.phases), "config"),
        ("permutation_verdict", "PASS" if verdict.is_permutation else "FAIL", "exact"),
        ("max_off_target", verdict.max_off_target, "exact"),
        ("detector_mapping",
         "-" if verdict.mapping is None else ",".join(str(k) for k in verdict.mapping),
         "exact"),
    ]
    for j, settings in enumerate(ALICE_SETTINGS):
        entries.append((f"alice_settings_{LETTER_NAMES[j]}",
                        ",".join(fmt(p) for p in settings.phases), "exact"))
    return Report("photonic routing", _header(spec),
                  (routing, metrics_table("verdict", entries)))


def cmd_equivalence(spec: RunSpec) -> Report:
    strategy = spec.config.eve if spec.eve_explicit else EveStrategy(kind=KIND_INTERCEPT_RESEND)
    rep = photonic_equivalence_check(spec.config.rounds, spec.config.seed, strategy)
    entries = [
        ("exact_max_deviation", rep.exact_max_deviation, "exact"),
        ("mc_rounds", rep.n_rounds, "config"),
    ]
    if rep.n_rounds:
        entries += [
            ("outcome_agreement", rep.outcome_agreement, "empirical"),
            ("max_frequency_deviation", rep.max_frequency_deviation, "empirical"),
            ("qter_abstract", rep.qter_abstract, "empirical"),
            ("qter_photonic", rep.qter_photonic, "empirical"),
            ("sifted_abstract", rep.sifted_abstract, "empirical"),
            ("sifted_photonic", rep.sifted_photonic, "empirical"),
        ]
    return Report("photonic equivalence", _header(spec),
                  (metrics_table("equivalence", entries),))


DISPATCH = {
    "run": cmd_run,
    "analyze": cmd_analyze,
    "photon": cmd_photon,
    "equivalence": cmd_equivalence,
}


def make_parser() -> _Parser:
    parser = _Parser(prog="quartkd", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in DISPATCH:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a key = value config file")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override one config key (repeatable)")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--format", choices=("text", "csv", "doc"), default="text")
        p.add_argument("--out", help="write the report here instead of stdout")
        if name == "run":
            p.add_argument("--transcript", help="also write the full transcript here")
            p.add_argument("--transcript-format", choices=("lines", "doc"),
                           default="lines", dest="transcript_format")
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"quartkd: error: {exc}", file=sys.stderr)
        return 1
    try:
        spec = build_spec(args)
        report = DISPATCH[spec.subcommand](spec)
        text = render(report, spec.output_format)
        if spec.out_path:
            Path(spec.out_path).write_text(text)
        else:
            sys.stdout.write(text)
    except ConfigError as exc:
        print(f"quartkd: config error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"quartkd: i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
