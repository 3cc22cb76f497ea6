"""Command-line pipeline: analyze single files, sweep corpora, self-test.

Exit codes are stable API: 0 success, 1 selftest failure, 2 decode failure,
3 empty (or too short) frequency sequence, 4 no decodable file in a corpus.
All reports are pure functions of (input bytes, config): keys are sorted and
nothing time- or host-dependent is written, so re-runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import distfit, network, selftest, spectral, svg_report
from .audio_io import decode_wav
from .errors import (
    AllFitsFailed,
    CorruptHeader,
    DegenerateData,
    EmptyAudio,
    SoundnetError,
    UnsupportedFormat,
)

ENV_OUT = "SOUNDNET_OUT"


@dataclass(frozen=True)
class RunConfig:
    mode: str = "stft"
    a4_hz: float = 440.0
    frame_size: int = 4096
    hop: int = 2048
    top_k: int = 5
    rel_threshold: float = 0.1
    floor_db: float = -60.0
    alignment: str = "union"
    out: str = "."
    seed: int = 0

    def peak_params(self) -> spectral.PeakParams:
        return spectral.PeakParams(
            frame_size=self.frame_size,
            hop=self.hop,
            top_k=self.top_k,
            rel_threshold=self.rel_threshold,
            floor_db=self.floor_db,
        )

    def grid(self) -> network.PitchGrid:
        return network.PitchGrid(a4_hz=self.a4_hz)

    def validate(self) -> None:
        if self.mode not in ("stft", "full"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.alignment not in (corpus_mod.ALIGN_UNION, corpus_mod.ALIGN_INTERSECTION):
            raise ValueError(f"unknown alignment {self.alignment!r}")
        self.peak_params()
        self.grid()


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)!r}")


def _dump_json(path: Path, payload: dict) -> None:
    text = json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=1, default=_json_default)
    path.write_text(text + "\n", encoding="utf-8")


def analyze_file(path, config: RunConfig):
    """Run the full single-piece pipeline; returns (report_dict, fit_report, net, seq).

    Raises the underlying decode errors, and InsufficientData / EmptyNetwork
    when the extracted sequence is too thin to analyze. A degenerate sequence
    (every component identical, e.g. a pure tone) still yields the network
    report; fit_report is then None and the fit section carries the reason.
    """
    audio = decode_wav(path)
    params = config.peak_params()
    if config.mode == "full":
        spectrum = spectral.dft(audio.samples, audio.sample_rate_hz)
        seq = spectral.extract_sequence_full(spectrum, params)
    else:
        seq = spectral.extract_sequence_stft(audio, params)

    try:
        fit_report = distfit.best_fit(seq.values_hz)  # raises InsufficientData on thin input
        fit_dict = distfit.report_to_dict(fit_report)
    except (DegenerateData, AllFitsFailed) as exc:
        fit_report = None
        fit_dict = {"best": None, "n": len(seq), "families": {}, "error": str(exc)}
    net = network.build_network(seq, config.grid())
    octaves = network.clique_octave_histogram(net.largest_clique)

    report = {
        "config": asdict(config),
        "source_path": str(path),
        "sample_rate_hz": audio.sample_rate_hz,
        "n_samples": len(audio),
        "duration_s": audio.duration_s,
        "mode": seq.mode.value,
        "sequence_length": len(seq),
        "fit": fit_dict,
        "network": network.network_to_dict(net),
        "clique_octaves": octaves,
    }
    return report, fit_report, net, seq


def _write_piece_artifacts(out_dir: Path, piece: str, report, fit_report, net, seq) -> None:
    _dump_json(out_dir / f"{piece}.json", {"piece_id": piece, **report})
    if fit_report is not None:  # the fit figure needs a converged best fit
        (out_dir / f"{piece}.fit.svg").write_bytes(svg_report.render_fit_svg(seq.values_hz, fit_report))
    (out_dir / f"{piece}.network.svg").write_bytes(svg_report.render_network_svg(net, clique_only=True))


def cmd_analyze(path: str, config: RunConfig) -> int:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    piece = Path(path).stem
    try:
        report, fit_report, net, seq = analyze_file(path, config)
    except (SoundnetError, OSError) as exc:
        return _analysis_exit(exc, path)
    _write_piece_artifacts(out_dir, piece, report, fit_report, net, seq)
    return 0


def _analysis_exit(exc, path) -> int:
    print(f"error: {path}: {exc}", file=sys.stderr)
    if isinstance(exc, (UnsupportedFormat, CorruptHeader, EmptyAudio, OSError)):
        return 2
    return 3  # InsufficientData / EmptyNetwork: nothing usable was extracted


def _piece_ids(paths) -> dict:
    """file path -> unique piece id (stem, numeric suffix on collision)."""
    ids = {}
    seen = {}
    for path in paths:
        stem = path.stem
        if stem in seen:
            seen[stem] += 1
            ids[path] = f"{stem}-{seen[stem]}"
        else:
            seen[stem] = 1
            ids[path] = stem
    return ids


def cmd_corpus(directory: str, config: RunConfig, jobs: int | None = None) -> int:
    out_dir = Path(config.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = sorted(p for p in Path(directory).iterdir() if p.suffix.lower() == ".wav")
    if not paths:
        print(f"error: no .wav files in {directory}", file=sys.stderr)
        return 4
    ids = _piece_ids(paths)
    workers = jobs or os.cpu_count() or 1

    outcomes = {}
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {ids[path]: pool.submit(analyze_file, path, config) for path in paths}
        for piece in sorted(futures):
            try:
                outcomes[piece] = ("ok", futures[piece].result())
            except (SoundnetError, OSError) as exc:
                outcomes[piece] = ("skip", str(exc))

    analyses = {}
    skipped = {}
    for piece in sorted(outcomes):
        status, payload = outcomes[piece]
        if status == "skip":
            skipped[piece] = payload
            print(f"warning: skipping {piece}: {payload}", file=sys.stderr)
            continue
        report, fit_report, net, seq = payload
        if fit_report is None:
            skipped[piece] = report["fit"]["error"]
            print(f"warning: skipping {piece}: {skipped[piece]}", file=sys.stderr)
            continue
        analyses[piece] = (fit_report, net)
        _write_piece_artifacts(out_dir, piece, report, fit_report, net, seq)

    if not analyses:
        print("error: no file in the corpus could be analyzed", file=sys.stderr)
        return 4

    report = corpus_mod.corpus_report(analyses, alignment=config.alignment)
    (out_dir / "corpus.summary.csv").write_text(corpus_mod.summary_csv(report), encoding="utf-8")
    if report.comparison.corr_matrix is not None:
        (out_dir / "corpus.matrix.csv").write_text(corpus_mod.matrix_csv(report.comparison), encoding="utf-8")
        (out_dir / "corpus.heatmap.svg").write_bytes(svg_report.render_heatmap_svg(report.comparison))
    (out_dir / "corpus.cliques.svg").write_bytes(svg_report.render_clique_bars_svg(report.comparison))
    collisions = {str(path): piece for path, piece in ids.items() if piece != path.stem}
    _dump_json(
        out_dir / "corpus.json",
        {
            "config": asdict(config),
            "pieces": sorted(analyses),
            "skipped": skipped,
            "piece_id_collisions": collisions,
            "comparison": corpus_mod.comparison_to_dict(report),
        },
    )
    return 0


def cmd_selftest(seed: int) -> int:
    results = selftest.run_selftest(seed)
    failures = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        failures += not check.passed
        print(f"{status} {check.name}: {check.detail}")
    print(f"{len(results) - failures}/{len(results)} checks passed (seed {seed})")
    return 1 if failures else 0


def _build_parser():
    parser = argparse.ArgumentParser(prog="soundnet", description="Analyze WAV recordings as networks of pitch bins.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config_flags(p):
        p.add_argument("--config", help="JSON file with default flag values (flags override)")
        p.add_argument("--mode", choices=("stft", "full"), default="stft")
        p.add_argument("--a4", dest="a4_hz", type=float, default=440.0, help="A4 reference in Hz")
        p.add_argument("--frame-size", type=int, default=4096)
        p.add_argument("--hop", type=int, default=2048)
        p.add_argument("--top-k", type=int, default=5)
        p.add_argument("--rel-threshold", type=float, default=0.1)
        p.add_argument("--floor-db", type=float, default=-60.0)
        p.add_argument("--alignment", choices=("union", "intersection"), default="union")
        p.add_argument("--out", default=None, help=f"output directory (default ${ENV_OUT} or .)")
        p.add_argument("--seed", type=int, default=0)

    p_analyze = sub.add_parser("analyze", help="analyze one WAV file")
    p_analyze.add_argument("file")
    add_config_flags(p_analyze)

    p_corpus = sub.add_parser("corpus", help="analyze every WAV in a directory")
    p_corpus.add_argument("dir")
    add_config_flags(p_corpus)
    p_corpus.add_argument("--jobs", type=int, default=None, help="worker pool size (default: logical CPUs)")

    p_selftest = sub.add_parser("selftest", help="run the built-in oracle checks")
    p_selftest.add_argument("--seed", type=int, default=42)
    return parser, {"analyze": p_analyze, "corpus": p_corpus}


_CONFIG_KEYS = (
    "mode",
    "a4_hz",
    "frame_size",
    "hop",
    "top_k",
    "rel_threshold",
    "floor_db",
    "alignment",
    "out",
    "seed",
)


def _apply_config_file(parser, subparser, argv: list) -> None:
    if "--config" not in argv:
        return
    at = argv.index("--config")
    if at + 1 >= len(argv):
        parser.error("--config expects a path")
    cfg_path = argv[at + 1]
    loaded = json.loads(Path(cfg_path).read_text(encoding="utf-8"))
    unknown = set(loaded) - set(_CONFIG_KEYS)
    if unknown:
        parser.error(f"unknown config keys: {sorted(unknown)}")
    subparser.set_defaults(**loaded)


def _config_from_args(args) -> RunConfig:
    out = args.out if args.out is not None else os.environ.get(ENV_OUT, ".")
    config = RunConfig(
        mode=args.mode,
        a4_hz=args.a4_hz,
        frame_size=args.frame_size,
        hop=args.hop,
        top_k=args.top_k,
        rel_threshold=args.rel_threshold,
        floor_db=args.floor_db,
        alignment=args.alignment,
        out=out,
        seed=args.seed,
    )
    config.validate()
    return config


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    if argv and argv[0] in subparsers:
        _apply_config_file(parser, subparsers[argv[0]], argv)
    args = parser.parse_args(argv)

    if args.command == "selftest":
        return cmd_selftest(args.seed)
    try:
        config = _config_from_args(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.command == "analyze":
        return cmd_analyze(args.file, config)
    return cmd_corpus(args.dir, config, jobs=args.jobs)


if __name__ == "__main__":
    sys.exit(main())
