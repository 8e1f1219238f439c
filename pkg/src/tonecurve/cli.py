"""Command line entry point: ``tonecurve {analyze,stats,synth,inspect}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .exceptions import ToneCurveError
from .ingest import (
    F0Track,
    TokenRecord,
    directory_loader,
    parse_f0_csv,
    parse_manifest,
    parse_pitchtier,
    read_text_file,
)
from .normalize import TIME_GRID, SpeakerReference, sample_ten_points, speaker_reference
from .pipeline import (
    FACTORS,
    RunConfig,
    analyze_manifest,
    compute_stats,
    errors_csv,
    read_results_csv,
    results_csv,
    results_json,
    stats_files,
)
from .synth import SynthCorpusConfig, effects_config, gen_corpus, write_corpus
from .tcatt import analyze_token


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_json(path):
    try:
        return json.loads(read_text_file(path))
    except FileNotFoundError:
        raise ToneCurveError(f"{path}: file not found") from None
    except json.JSONDecodeError as exc:
        raise ToneCurveError(f"{path}: invalid JSON ({exc.msg})") from None


def build_run_config(args) -> RunConfig:
    """Defaults < ``--config`` file < explicit flags."""
    values = {}
    if getattr(args, "config", None):
        data = _load_json(args.config)
        unknown = set(data) - set(RunConfig.field_names())
        if unknown:
            raise ToneCurveError(f"{args.config}: unknown config keys {sorted(unknown)}")
        values.update(data)
    for name in RunConfig.field_names():
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    return RunConfig(**values)


def cmd_analyze(args) -> int:
    config = build_run_config(args)
    if not config.manifest or not config.output_dir:
        raise ToneCurveError("analyze needs --manifest and --output-dir")
    manifest_path = Path(config.manifest)
    try:
        manifest = parse_manifest(read_text_file(manifest_path))
    except FileNotFoundError:
        raise ToneCurveError(f"{manifest_path}: file not found") from None
    rows, errors = analyze_manifest(manifest, directory_loader(manifest_path.parent),
                                    config, workers=args.workers)
    out = Path(config.output_dir)
    _write(out / "errors.csv", errors_csv(errors))
    if not rows:
        print(f"no token could be analyzed ({len(errors)} errors, see errors.csv)",
              file=sys.stderr)
        return 1
    _write(out / "results.csv", results_csv(rows, config))
    _write(out / "results.json", results_json(rows, config))
    _write(out / "run_metadata.json",
           json.dumps(config.metadata(), indent=2, sort_keys=True) + "\n")
    print(f"{len(rows)} tokens analyzed, {len(errors)} errors -> {out}")
    return 0


def cmd_stats(args) -> int:
    path = Path(args.results)
    try:
        rows = read_results_csv(read_text_file(path))
    except FileNotFoundError:
        raise ToneCurveError(f"{path}: file not found") from None
    factors = [f.strip() for f in args.factors.split(",") if f.strip()]
    report = compute_stats(rows, factors, args.interactions, args.one_way_fallback)
    out = Path(args.output_dir) if args.output_dir else path.parent
    for name, text in stats_files(report).items():
        _write(out / name, text)
    for row in report.anova:
        if row["dependent"] == "curvature_index" and row["F"] is not None:
            print(f"{row['effect']:>20s}  F={row['F']:.3f}  p={row['p']:.4f}")
    return 0


def _effect(text: str):
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError("effects look like factor:level=semitones")
    return key, float(value)


def cmd_synth(args) -> int:
    if args.preset == "null":
        config = SynthCorpusConfig()
    else:
        config = effects_config()
    if args.config:
        merged = config.to_dict()
        merged.update(_load_json(args.config))
        config = SynthCorpusConfig.from_dict(merged)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.noise_sd is not None:
        overrides["noise_sd_st"] = args.noise_sd
    if args.speakers_per_gender is not None:
        overrides["n_speakers_per_gender"] = args.speakers_per_gender
    if args.repetitions is not None:
        overrides["repetitions"] = args.repetitions
    if args.coupling is not None:
        overrides["coupling_ms_per_st"] = args.coupling
    if args.effect:
        overrides["effects"] = {**config.effects, **dict(args.effect)}
    try:
        config = replace(config, **overrides)
    except ValueError as exc:
        raise ToneCurveError(str(exc)) from None
    corpus = gen_corpus(config)
    manifest = write_corpus(corpus, args.output_dir)
    print(f"{len(corpus)} tokens -> {manifest}")
    return 0


def _read_track(path: Path, fmt: str) -> F0Track:
    try:
        text = read_text_file(path)
    except FileNotFoundError:
        raise ToneCurveError(f"{path}: file not found") from None
    if fmt == "auto":
        fmt = "pitchtier" if "PitchTier" in text[:200] else "csv"
    parser = parse_pitchtier if fmt == "pitchtier" else parse_f0_csv
    return parser(text, source_id=str(path))


def inspect_report(track: F0Track, interval=None, ref_hz=None,
                   reference_method="arithmetic_mean", eps_slope=1e-6,
                   semitone_scale=1.0, min_coverage=0.5) -> str:
    """Human-readable walk through both TCATT steps for one token."""
    if interval is None:
        interval = (float(track.times[0]), float(track.times[-1]))
    xmin, xmax = interval
    token = TokenRecord("inspect", "", "F", "T2T2", "medial", 1, "", track.slice(xmin, xmax),
                        (xmin, xmax))
    if ref_hz is None:
        ref = speaker_reference([token.track_slice], reference_method, "inspect")
    else:
        ref = SpeakerReference("inspect", float(ref_hz), 1, "fixed")
    contour = sample_ten_points(token, ref, min_coverage)
    res = analyze_token(contour, eps_slope, semitone_scale)
    lm, sl = res.landmarks, res.slopes

    def opt(v):
        return "undefined" if v is None else f"{v:.4f}"

    lines = [f"interval      [{xmin:.4f}, {xmax:.4f}] s, duration {contour.duration_ms:.1f} ms",
             f"reference     {ref.ref_hz:.3f} Hz ({ref.method}, n={ref.n_samples})",
             "points        i     t        s (st)"]
    for i, (t, s) in enumerate(zip(TIME_GRID, contour.s)):
        lines.append(f"             {i:2d}  {t:.4f}  {s:+.4f}")
    lines += [f"onset B       index 0, s = {lm.B.s:+.4f}",
              f"offset C      index 9, s = {lm.C.s:+.4f}",
              f"lowest        index {lm.lo_index}, s = {lm.lo.s:+.4f}",
              f"highest       index {lm.hi_index}, s = {lm.hi.s:+.4f}",
              f"slopes        k = {sl.k:.4f}, k_min = {opt(sl.k_min)}, k_max = {opt(sl.k_max)}",
              f"class         {res.contour_class.value}"]
    for n, turn in enumerate(res.turns, start=1):
        lines.append(f"turn {n}        index {turn.index}: cos = {turn.cos_angle:.3f}, "
                     f"angle = {turn.angle_rad:.4f} rad, sine = {turn.sine:.3f}, "
                     f"obtuse = {turn.obtuse}, paper_sine = {turn.paper_sine:.4f}")
    lines.append(f"curvature     {res.curvature_index:.4f}")
    return "\n".join(lines)


def cmd_inspect(args) -> int:
    track = _read_track(Path(args.track), args.format)
    print(inspect_report(track, tuple(args.interval) if args.interval else None,
                         args.ref_hz, args.reference_method, args.eps_slope,
                         args.semitone_axis_scale, args.voiced_coverage_threshold))
    return 0


def _add_analysis_flags(p, defaults_none=True):
    d = (lambda v: None) if defaults_none else (lambda v: v)
    p.add_argument("--reference-method", choices=["arithmetic_mean", "geometric_mean"],
                   default=d("arithmetic_mean"))
    p.add_argument("--voiced-coverage-threshold", type=float, default=d(0.5))
    p.add_argument("--eps-slope", type=float, default=d(1e-6))
    p.add_argument("--semitone-axis-scale", type=float, default=d(1.0))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tonecurve", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="run TCATT over a corpus manifest")
    p.add_argument("--manifest")
    p.add_argument("--output-dir")
    p.add_argument("--config", help="JSON file with run settings; flags override it")
    _add_analysis_flags(p)
    p.add_argument("--emit-paper-sine", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("stats", help="statistics over results.csv")
    p.add_argument("results")
    p.add_argument("--output-dir")
    p.add_argument("--factors", default=",".join(FACTORS))
    p.add_argument("--interactions", action="store_true")
    p.add_argument("--one-way-fallback", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="write a synthetic corpus")
    p.add_argument("--output-dir", required=True)
    p.add_argument("--preset", choices=["effects", "null"], default="effects")
    p.add_argument("--config", help="JSON file with synth settings")
    p.add_argument("--seed", type=int)
    p.add_argument("--noise-sd", type=float)
    p.add_argument("--speakers-per-gender", type=int)
    p.add_argument("--repetitions", type=int)
    p.add_argument("--coupling", type=float, help="ms of duration per st of dip depth")
    p.add_argument("--effect", type=_effect, action="append",
                   help="factor:level=semitones added to the dip depth (repeatable)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("inspect", help="explain TCATT on a single track")
    p.add_argument("track")
    p.add_argument("--format", choices=["auto", "csv", "pitchtier"], default="auto")
    p.add_argument("--interval", type=float, nargs=2, metavar=("XMIN", "XMAX"))
    p.add_argument("--ref-hz", type=float)
    _add_analysis_flags(p, defaults_none=False)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ToneCurveError, ValueError) as exc:
        print(f"tonecurve {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
