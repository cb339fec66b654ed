"""Command-line front end: ``tilingspectra <command> [family] [level] [options]``.

Exit status is 0 on success, 1 when a verification criterion or a
computation fails, and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .energy import EnergyParseError, parse_energy
from .spectral import DEFAULT_DENSE_THRESHOLD, DEFAULT_EXACT_THRESHOLD, field_for_family

log = logging.getLogger("tilingspectra")

ALIASES = {
    "ab": "AmmannBeenker",
    "ammannbeenker": "AmmannBeenker",
    "ammann-beenker": "AmmannBeenker",
    "boatstar": "BoatStar",
    "boat-star": "BoatStar",
    "triangle": "Triangle",
    "robinson": "Triangle",
    "rhombus": "Rhombus",
    "kitedart": "KiteDart",
    "kite-dart": "KiteDart",
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str | None = None
    levels: list[int] = field(default_factory=list)
    energies: list[str] = field(default_factory=list)
    grid: tuple[float, float, int] | None = None
    delta: float | None = None
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD
    exact_threshold: int = DEFAULT_EXACT_THRESHOLD
    out: Path = Path(".")
    workers: int = 1
    svg: bool = False
    suite: str = "all"
    pattern: str | None = None
    min_width: float = 0.01

    @property
    def level(self) -> int:
        if len(self.levels) != 1:
            raise UsageError(f"{self.command} takes a single level")
        return self.levels[0]

    def grid_array(self) -> np.ndarray | None:
        if self.grid is None:
            return None
        lo, hi, n = self.grid
        return np.linspace(lo, hi, n)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _family(name: str) -> str:
    from .tiling import FAMILY_NAMES

    if name in FAMILY_NAMES:
        return name
    key = name.lower()
    if key in ALIASES:
        return ALIASES[key]
    raise UsageError(f"unknown family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


def parse_levels(text: str) -> list[int]:
    """``"5"``, ``"2-5"`` or ``"2,4,6"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                a, b = part.split("-", 1)
                out.extend(range(int(a), int(b) + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise UsageError(f"bad level list {text!r}") from exc
    if not out or min(out) < 0:
        raise UsageError(f"bad level list {text!r}")
    return sorted(set(out))


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except (IndexError, ValueError) as exc:
        raise UsageError(f"grid must be MIN:MAX:POINTS, got {text!r}") from exc
    if len(parts) != 3 or not hi > lo or n < 2:
        raise UsageError(f"grid must be ascending with at least 2 points, got {text!r}")
    return lo, hi, n


def _positive(kind):
    def conv(text):
        v = kind(text)
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v

    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("family_pos", nargs="?", metavar="FAMILY")
    common.add_argument("level_pos", nargs="?", metavar="LEVEL")
    common.add_argument("--family")
    common.add_argument("--level")
    common.add_argument("--levels")
    common.add_argument("--energy", action="append", default=[], help="exact token such as 4, 6-phi, 1/phi^2, 3+sqrt2")
    common.add_argument("--grid", help="MIN:MAX:POINTS")
    common.add_argument("--delta", type=_positive(float))
    common.add_argument("--dense-threshold", type=_positive(int), default=DEFAULT_DENSE_THRESHOLD)
    common.add_argument("--exact-threshold", type=_positive(int), default=DEFAULT_EXACT_THRESHOLD)
    common.add_argument("--out", type=Path, default=Path("."))
    common.add_argument("--workers", type=_positive(int), default=1)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tilingspectra", description="Spectra of substitution tilings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="write a patch file and optionally an SVG").add_argument(
        "--svg", action="store_true"
    )
    sub.add_parser("spectrum", parents=[common], help="eigenvalues or an inertia table")
    sub.add_parser("ids", parents=[common], help="IDS curves over several levels")
    sub.add_parser("modes", parents=[common], help="exact eigenspace and locally supported modes")
    sub.add_parser("census", parents=[common], help="prototile counts against closed forms")
    sub.add_parser("occurrences", parents=[common], help="count a catalog pattern").add_argument(
        "--pattern", default="ring", help="catalog mode name, or 'star' for the eight-rhomb star"
    )
    sub.add_parser("gaps", parents=[common], help="eigenvalue-free intervals common to all levels").add_argument(
        "--min-width", type=_positive(float), default=0.01
    )
    sub.add_parser("verify", parents=[common], help="run the reproduction checks").add_argument(
        "--suite", default="all"
    )
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    fam = args.family or args.family_pos
    lvl = args.levels or args.level or args.level_pos
    cfg = RunConfig(
        command=args.command,
        family=_family(fam) if fam else None,
        levels=parse_levels(lvl) if lvl else [],
        energies=[e.removeprefix("E=") for e in args.energy],
        grid=parse_grid(args.grid) if args.grid else None,
        delta=args.delta,
        dense_threshold=args.dense_threshold,
        exact_threshold=args.exact_threshold,
        out=args.out,
        workers=args.workers,
        svg=getattr(args, "svg", False),
        suite=getattr(args, "suite", "all"),
        pattern=getattr(args, "pattern", None),
        min_width=getattr(args, "min_width", 0.01),
    )
    if cfg.command != "verify" and cfg.family is None:
        raise UsageError(f"{cfg.command} needs a family")
    if cfg.command not in ("verify", "census") and not cfg.levels:
        raise UsageError(f"{cfg.command} needs a level")
    return cfg


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def meta_line(family: str, level, tiles) -> str:
    return f"family={family} level={level} tiles={tiles} version={__version__}"


def _write(cfg: RunConfig, name: str, text: str) -> Path:
    cfg.out.mkdir(parents=True, exist_ok=True)
    path = cfg.out / name
    path.write_text(text)
    print(path)
    return path


def _energies(cfg: RunConfig):
    fld = field_for_family(cfg.family)
    try:
        return [parse_energy(tok, fld) for tok in cfg.energies]
    except EnergyParseError as exc:
        raise UsageError(str(exc)) from exc


def _pmap(fn, items, workers: int):
    """Map over ``items`` in worker processes, results in input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))


def _default_grid(lap, points: int = 2001) -> np.ndarray:
    top = float(abs(lap).sum(axis=1).max())
    return np.linspace(0.0, top, points)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_generate(cfg: RunConfig) -> int:
    from .render import patch_svg
    from .tiling import generate

    patch = generate(cfg.family, cfg.level)
    stem = f"{cfg.family}_L{cfg.level}"
    _write(cfg, f"{stem}.json", patch.to_json())
    if cfg.svg:
        _write(cfg, f"{stem}.svg", patch_svg(patch))
    print(f"{cfg.family} level {cfg.level}: {len(patch)} tiles")
    return 0


def cmd_spectrum(cfg: RunConfig) -> int:
    from .analysis import patch_laplacian
    from .spectral import summarize

    _, _, lap = patch_laplacian(cfg.family, cfg.level)
    n = lap.shape[0]
    if n > cfg.dense_threshold and cfg.grid is None:
        raise UsageError(f"{n} tiles exceed the dense threshold; pass --grid for an inertia table")
    s = summarize(lap, cfg.grid_array(), [float(e) for e in _energies(cfg)], cfg.dense_threshold)
    meta = meta_line(cfg.family, cfg.level, n)
    stem = f"{cfg.family}_L{cfg.level}"
    if s.eigenvalues is not None:
        _write(cfg, f"{stem}_eigenvalues.csv", s.eigenvalues_csv(meta))
        print(f"{n} eigenvalues in [{s.eigenvalues[0]:.6g}, {s.eigenvalues[-1]:.6g}]")
    if s.inertia_table:
        _write(cfg, f"{stem}_inertia.csv", s.inertia_csv(meta))
    for e, m in s.multiplicities.items():
        print(f"multiplicity at E={e:.10g}: {m.count} ({'stable' if m.stable else f'unstable {m.counts}'})")
    return 0


def _ids_job(job):
    from .analysis import ids_curve, patch_laplacian

    family, level, grid, dense_threshold = job
    _, _, lap = patch_laplacian(family, level)
    if grid is None:
        grid = _default_grid(lap)
    return ids_curve(lap, grid, family, level, dense_threshold=dense_threshold)


def cmd_ids(cfg: RunConfig) -> int:
    from .analysis import convergence_csv, jump_convergence
    from .render import ids_svg

    grid = cfg.grid_array()
    jobs = [(cfg.family, lv, grid, cfg.dense_threshold) for lv in cfg.levels]
    curves = _pmap(_ids_job, jobs, cfg.workers)
    for c in curves:
        _write(cfg, f"{cfg.family}_L{c.level}_ids.csv", c.to_csv(meta_line(cfg.family, c.level, c.tile_count)))
    energies = _energies(cfg)
    _write(cfg, f"{cfg.family}_ids.svg", ids_svg(curves, [float(e) for e in energies]))
    for tok, e in zip(cfg.energies, energies):
        rows = [r for r in jump_convergence(cfg.family, e, max(cfg.levels), min(cfg.levels)) if r.level in cfg.levels]
        levels = "-".join(str(x) for x in (cfg.levels[0], cfg.levels[-1]))
        meta = meta_line(cfg.family, levels, "/".join(str(r.tiles) for r in rows)) + f" E={e}"
        _write(cfg, f"{cfg.family}_jumps_E{_slug(tok)}.csv", convergence_csv(rows, meta))
        for r in rows:
            print(f"level {r.level}: jump at E={e} is {r.multiplicity}/{r.tiles} = {r.jump:.8f}")
    return 0


def _slug(token: str) -> str:
    return re.sub(r"[^A-Za-z0-9.+-]", "_", token)


def cmd_modes(cfg: RunConfig) -> int:
    from .analysis import classify_modes, patch_laplacian
    from .render import mode_svg
    from .spectral import exact_nullspace

    energies = _energies(cfg)
    if not energies:
        raise UsageError("modes needs --energy")
    patch, g, lap = patch_laplacian(cfg.family, cfg.level)
    for tok, e in zip(cfg.energies, energies):
        basis = exact_nullspace(lap, e, cfg.exact_threshold)
        report = classify_modes(basis, g, lap)
        stem = f"{cfg.family}_L{cfg.level}_E{_slug(tok)}"
        doc = {"family": cfg.family, "level": cfg.level, "tiles": lap.shape[0], "version": __version__}
        doc.update(report.to_json())
        _write(cfg, f"{stem}_modes.json", json.dumps(doc, indent=1, sort_keys=True) + "\n")
        _write(cfg, f"{stem}_modes.svg", mode_svg(patch, report.representatives))
        sizes = sorted(set(report.support_sizes))
        print(
            f"E={e}: {report.total_dim} modes, {report.interior_count} interior, "
            f"{report.boundary_count} boundary; supports {sizes}"
        )
    return 0


def _census_job(job):
    from .tiling import generate, predicted_counts, tile_census

    family, level = job
    patch = generate(family, level)
    return level, tile_census(patch), predicted_counts(family, level)


def cmd_census(cfg: RunConfig) -> int:
    from .tiling import census_labels

    levels = cfg.levels or list(range(0, 4))
    labels = census_labels(cfg.family)
    rows = _pmap(_census_job, [(cfg.family, lv) for lv in levels], cfg.workers)
    buf = io.StringIO()
    buf.write(f"# {meta_line(cfg.family, f'{levels[0]}-{levels[-1]}', '/'.join(str(sum(r[1])) for r in rows))}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", *labels, "total", "predicted"])
    for level, counts, pred in rows:
        w.writerow([level, *counts, sum(counts), "" if pred is None else pred["total"]])
        print(f"level {level}: {sum(counts)} tiles " + " ".join(f"{a}={c}" for a, c in zip(labels, counts)))
    _write(cfg, f"{cfg.family}_census.csv", buf.getvalue())
    return 0


def cmd_occurrences(cfg: RunConfig) -> int:
    from .analysis import count_occurrences, eightfold_star, find_spec, mode_pattern, placed_modes
    from .tiling import generate

    patch = generate(cfg.family, cfg.level)
    if cfg.pattern == "star":
        if cfg.family != "AmmannBeenker":
            raise UsageError("the star pattern belongs to AmmannBeenker")
        count = count_occurrences(patch, eightfold_star())
        print(f"{count} eight-rhomb stars in {len(patch)} tiles, frequency {count / len(patch):.6f}")
        return 0
    energies = _energies(cfg)
    try:
        spec = find_spec(cfg.family, cfg.pattern, energies[0] if energies else None)
    except KeyError as exc:
        raise UsageError(str(exc)) from exc
    count = count_occurrences(patch, mode_pattern(spec))
    valid = len(placed_modes(patch, spec))
    print(f"{count} copies of the {spec.name} support, {valid} exact eigenfunctions at E={spec.energy}")
    return 0


def cmd_gaps(cfg: RunConfig) -> int:
    from .analysis import persistent_gaps

    grid = cfg.grid_array()
    if grid is None:
        raise UsageError("gaps needs --grid")
    gaps = persistent_gaps(cfg.family, cfg.levels, grid, min_width=cfg.min_width, dense_threshold=cfg.dense_threshold)
    buf = io.StringIO()
    buf.write(f"# {meta_line(cfg.family, f'{cfg.levels[0]}-{cfg.levels[-1]}', '')}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lo", "hi", "width"])
    for gp in gaps:
        w.writerow([f"{gp.lo:.6f}", f"{gp.hi:.6f}", f"{gp.hi - gp.lo:.6f}"])
    _write(cfg, f"{cfg.family}_gaps.csv", buf.getvalue())
    print(f"{len(gaps)} gaps wider than {cfg.min_width} persist over levels {cfg.levels}")
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    from .verify import SUITES, run_suite

    if cfg.suite not in SUITES:
        raise UsageError(f"unknown suite {cfg.suite!r}; expected one of {', '.join(SUITES)}")
    checks = run_suite(cfg.suite)
    for c in checks:
        print(c.line(), flush=True)
    doc = {"suite": cfg.suite, "version": __version__, "checks": [c.to_json() for c in checks]}
    _write(cfg, f"verify_{cfg.suite}.json", json.dumps(doc, indent=1) + "\n")
    return 0 if all(c.passed for c in checks) else 1


COMMANDS = {
    "generate": cmd_generate,
    "spectrum": cmd_spectrum,
    "ids": cmd_ids,
    "modes": cmd_modes,
    "census": cmd_census,
    "occurrences": cmd_occurrences,
    "gaps": cmd_gaps,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except Exception as exc:  # noqa: BLE001 - report, then signal failure
        log.error("%s: %s", type(exc).__name__, exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
