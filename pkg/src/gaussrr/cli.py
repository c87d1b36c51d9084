"""Command-line front end.

Exit codes: 0 success, 1 usage/parse/I-O error, 2 numerical non-agreement.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .cycles import CycleError, CycleEvaluationError, chi_via_cc, parse_cycle, verify_cor_1_5
from .euler import NONDEGENERATE, EulerError, chi_nondegenerate_hypersurface, nondegeneracy_check
from .gauss import GaussError, gaussian_degree_1d, gaussian_degree_hypersurface
from .homotopy import CapExceeded, TrackerConfig
from .laurent import ParseError, format_polynomial, parse

SCHEMA_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DISAGREE = 0, 1, 2
BUNDLED_CORPUS = "corpus/n2_nondegenerate.txt"


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    seed: int = 42
    samples: int = 3
    tol: float | None = None
    structured: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise UsageError("-n must be a positive integer")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        if self.samples < 3:
            raise UsageError("--samples must be at least 3")
        if self.tol is not None and not 0 < self.tol < 1:
            raise UsageError("--tol must lie in (0, 1)")

    def tracker(self) -> TrackerConfig:
        if self.tol is None:
            return TrackerConfig(seed=self.seed)
        return TrackerConfig(seed=self.seed, endpoint_tol=self.tol)


def _emit(cfg: RunConfig, command: str, payload: dict, text: str, out) -> None:
    if cfg.structured:
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "seed": cfg.seed, "samples": cfg.samples, **payload}
        out.write(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _gdeg_text(poly: str, rep) -> str:
    lines = [f"gdeg({poly}) = {rep.gdeg}"]
    lines.append(f"  agreed: {'yes' if rep.agreed else 'no'}")
    if rep.bkk is not None:
        lines.append(f"  bkk bound: {rep.bkk}")
    if rep.samples:
        lines.append("  samples: " + ", ".join(str(s.count) if s.valid else f"{s.count}(invalid)" for s in rep.samples))
    for w in rep.warnings:
        lines.append(f"  warning: {w}")
    return "\n".join(lines)


def cmd_gdeg(args, cfg: RunConfig, out) -> int:
    f = parse(args.poly, cfg.n)
    poly = format_polynomial(f)
    if cfg.n == 1 and not f.is_zero():
        from .gauss import GaussDegreeReport

        rep = GaussDegreeReport(gaussian_degree_1d(f))
        if f.is_monomial():
            rep.warnings.append("monomial: the zero set in the torus is empty")
    else:
        rep = gaussian_degree_hypersurface(f, cfg.tracker(), cfg.samples)
    _emit(cfg, "gdeg", {"n": cfg.n, "polynomial": poly, "report": rep.as_dict()}, _gdeg_text(poly, rep), out)
    return EXIT_OK if rep.agreed else EXIT_DISAGREE


def cmd_chi(args, cfg: RunConfig, out) -> int:
    f = parse(args.poly, cfg.n)
    poly = format_polynomial(f)
    chi = chi_nondegenerate_hypersurface(f)
    verdict = nondegeneracy_check(f, cfg.tracker())
    chi.nondegenerate = verdict.status == NONDEGENERATE
    lines = [f"chi(V({poly})) = {chi.chi}  [{chi.method}]", f"  nondegeneracy: {verdict}"]
    if verdict.status != NONDEGENERATE:
        lines.append("  warning: input is not known to be Newton nondegenerate; value is the volume-based formula only")
    payload = {"n": cfg.n, "polynomial": poly, "report": chi.as_dict(), "nondegeneracy": verdict.as_dict()}
    _emit(cfg, "chi", payload, "\n".join(lines), out)
    return EXIT_OK


def cmd_cycle(args, cfg: RunConfig, out) -> int:
    text = _read_text(Path(args.file))
    cycle = parse_cycle(text)
    try:
        rep = chi_via_cc(cycle, cfg.tracker(), cfg.samples)
        code = EXIT_OK
    except CycleEvaluationError as exc:
        rep = exc.partial
        code = EXIT_DISAGREE
        sys.stderr.write(f"gaussrr: {exc}\n")
    lines = [f"chi via characteristic cycle = {rep.chi}"]
    for c in rep.components:
        lines.append(f"  {c.multiplicity:+d} * gdeg[{c.kind} {c.content}] = {c.multiplicity:+d} * {c.gdeg}"
                     + ("" if c.agreed else "  (samples disagree)"))
    payload = {"n": cycle.n, "cycle": cycle.to_document(), "report": rep.as_dict(), "agreed": code == EXIT_OK}
    _emit(cfg, "cycle", payload, "\n".join(lines), out)
    return code


# ---------------------------------------------------------------------------
# corpus verification


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _corpus_text(name: str) -> str:
    path = Path(name)
    if path.exists() or name != BUNDLED_CORPUS:
        return _read_text(path)
    return resources.files("gaussrr").joinpath(BUNDLED_CORPUS).read_text(encoding="utf-8")


def read_corpus(text: str, n: int) -> list[tuple[int, str, object]]:
    """(line number, source text, parsed entry) for each non-comment line.

    Lines starting with '{' are cycle documents, anything else a polynomial.
    Raises UsageError naming the line on the first parse failure.
    """
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip() if not raw.lstrip().startswith("{") else raw.strip()
        if not line:
            continue
        try:
            if line.startswith("{"):
                entries.append((lineno, line, parse_cycle(line)))
            else:
                entries.append((lineno, line, parse(line, n)))
        except (ParseError, CycleError, ValueError) as exc:
            raise UsageError(f"line {lineno}: {exc}") from exc
    return entries


def _verify_entry(job):
    source, entry, tracker, samples = job
    start = time.perf_counter()
    if hasattr(entry, "components"):
        try:
            rep = chi_via_cc(entry, tracker, samples)
            row = {"kind": "cycle", "status": "evaluated", "chi_via_cc": rep.chi, "agreed": True}
        except CycleEvaluationError as exc:
            row = {"kind": "cycle", "status": "disagreement", "chi_via_cc": exc.partial.chi, "agreed": False}
    else:
        try:
            row = {"kind": "hypersurface", **verify_cor_1_5(entry, tracker, samples).as_dict()}
        except (EulerError, GaussError, CapExceeded) as exc:
            row = {"kind": "hypersurface", "status": "not applicable", "notes": [str(exc)]}
    row["source"] = source
    return row, time.perf_counter() - start


def _row_ok(row: dict) -> bool:
    if row["status"] == "not applicable":
        return True
    if row["kind"] == "cycle":
        return row["agreed"]
    return row["status"] == "equal" and bool(row.get("agreed"))


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def cmd_verify(args, cfg: RunConfig, out) -> int:
    entries = read_corpus(_corpus_text(args.corpus), cfg.n)
    tracker = cfg.tracker()
    jobs = [(src, entry, tracker, cfg.samples) for _, src, entry in entries]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_verify_entry, jobs))  # map keeps input order
    else:
        results = [_verify_entry(j) for j in jobs]
    rows = [r for r, _ in results]
    ok = all(_row_ok(r) for r in rows)
    applicable = sum(r["status"] != "not applicable" for r in rows)
    passed = sum(_row_ok(r) and r["status"] != "not applicable" for r in rows)

    lines = [f"{'#':>3}  {'gdeg':>4}  {'chi':>4}  {'equal':>5}  {'agreed':>6}  {'bkk':>4}  {'time':>7}  entry"]
    for i, (row, secs) in enumerate(results, start=1):
        if row["kind"] == "cycle":
            gd, chi, eq = row["chi_via_cc"], None, None
        else:
            gd, chi = row.get("gdeg"), row.get("signed_chi")
            eq = None if row["status"] == "not applicable" else row["status"] == "equal"
        lines.append(
            f"{i:>3}  {_fmt(gd):>4}  {_fmt(chi):>4}  {_fmt(eq):>5}  {_fmt(row.get('agreed')):>6}  "
            f"{_fmt(row.get('bkk')):>4}  {secs:6.2f}s  {row['source']}"
        )
        if row["status"] == "not applicable":
            reason = "degenerate" if "degenerate" in str(row.get("nondegeneracy", "")) else "; ".join(row.get("notes", []))
            lines.append(f"       not applicable ({reason})")
    lines.append(f"{passed}/{applicable} applicable entries verified, {len(rows) - applicable} not applicable")
    # runtimes stay out of the structured report so identical runs are byte-identical
    payload = {"n": cfg.n, "entries": rows, "all_verified": ok, "applicable": applicable, "verified": passed}
    _emit(cfg, "verify", payload, "\n".join(lines), out)
    return EXIT_OK if ok else EXIT_DISAGREE


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, default=2, help="ambient torus dimension (default 2)")
    common.add_argument("--seed", type=int, default=42, help="base random seed (default 42)")
    common.add_argument("--samples", type=int, default=3, help="independent covector draws, at least 3")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--tol", type=float, default=None, help="endpoint refinement tolerance")

    p = argparse.ArgumentParser(prog="gaussrr", description="Gaussian degrees and Euler characteristics on (C*)^n.")
    sub = p.add_subparsers(dest="command", required=True)
    g = sub.add_parser("gdeg", parents=[common], help="Gaussian degree of a hypersurface V(f)")
    g.add_argument("poly")
    g.set_defaults(func=cmd_gdeg)
    c = sub.add_parser("chi", parents=[common], help="Euler characteristic of V(f) from its Newton polytope")
    c.add_argument("poly")
    c.set_defaults(func=cmd_chi)
    v = sub.add_parser("verify", parents=[common], help="compare gdeg with the Euler characteristic over a corpus")
    v.add_argument("corpus", nargs="?", default=BUNDLED_CORPUS)
    v.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    v.set_defaults(func=cmd_verify)
    y = sub.add_parser("cycle", parents=[common], help="chi via a characteristic cycle document (JSON or YAML)")
    y.add_argument("file")
    y.set_defaults(func=cmd_cycle)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = RunConfig(args.n, args.seed, args.samples, args.tol, args.format == "structured", getattr(args, "jobs", 1))
        return args.func(args, cfg, out)
    except (UsageError, ParseError, CycleError, EulerError, GaussError, CapExceeded, ValueError) as exc:
        sys.stderr.write(f"gaussrr: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
