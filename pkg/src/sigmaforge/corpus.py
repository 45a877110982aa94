"""Corpus manifests and the batch runner behind ``sigmaforge corpus``.

A manifest line reads ``catalog-name ; sigma-spec ; check ; expected``, with
``#`` comments.  Results come back in manifest order whatever the worker count.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import ParseError, SigmaForgeError
from .report import PropertyReport

# every catalog group of order <= 24 used by the acceptance suite
SMALL_GROUPS = (
    [f"C{n}" for n in range(1, 25)]
    + [f"D{n}" for n in range(6, 25, 2)]
    + ["V4", "S3", "S4", "A4", "Q8", "SL2_3", "Dic12", "Dic16", "Dic20", "Dic24",
       "C5:C4", "C7:C3", "C3:C8", "C4:C4",
       "S3xC2", "S3xC3", "S3xC4", "C2xC2xC2", "C2xC2xC2xC2", "C2xC4", "C2xC8", "C4xC4",
       "C2xC6", "C2xC2xC6", "C3xC3", "C3xC6", "C2xC10", "C2xC12",
       "Q8xC2", "Q8xC3", "D8xC2", "D8xC3", "A4xC2", "Dic12xC2", "C7:C3", "D6xC2"]
)
INSOLUBLE_GROUPS = ("A5", "SL2_5", "S5", "A5xC2")


def corpus_groups() -> list[str]:
    seen, out = set(), []
    for name in SMALL_GROUPS:
        if name not in seen:
            seen.add(name)
            out.append(name)
    return out


@dataclass(frozen=True)
class CorpusCase:
    group: str
    sigma: str
    check: str
    expected: bool
    line: int = 0


def parse_manifest(text: str) -> list[CorpusCase]:
    cases = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 4 or not all(parts):
            raise ParseError("expected 'group ; sigma ; check ; expected'", lineno, 1)
        if parts[3] not in ("true", "false"):
            raise ParseError(f"expected verdict must be true or false, got {parts[3]!r}", lineno,
                             raw.rfind(parts[3]) + 1)
        cases.append(CorpusCase(parts[0], parts[1], parts[2], parts[3] == "true", lineno))
    return cases


def default_manifest_text() -> str:
    return resources.files("sigmaforge").joinpath("data/corpus.txt").read_text()


def load_manifest(path: str | Path | None = None) -> list[CorpusCase]:
    text = default_manifest_text() if path is None else Path(path).read_text()
    return parse_manifest(text)


_GROUPS: dict = {}


def _group(name: str):
    from .catalog import build
    if name not in _GROUPS:
        _GROUPS[name] = build(name)
    return _GROUPS[name]


def run_case(case: CorpusCase) -> dict:
    from .cli import run_check
    from .sigma import parse_sigma_spec
    try:
        g = _group(case.group)
        report = run_check(case.check, g, parse_sigma_spec(case.sigma))
    except SigmaForgeError as exc:
        report = PropertyReport(case.check, None, sigma=case.sigma, status="inconclusive-at-scale"
                                if type(exc).__name__ == "ScaleError" else "not-applicable", note=str(exc))
    passed = report.verdict == case.expected and report.all_consistent() and report.status == "ok"
    return {
        "group": case.group,
        "sigma": case.sigma,
        "check": case.check,
        "expected": case.expected,
        "verdict": report.verdict,
        "status": report.status,
        "consistent": report.all_consistent(),
        "pass": passed,
        "report": report.to_dict(),
    }


def _run_group(cases: list[CorpusCase]) -> list[dict]:
    return [run_case(c) for c in cases]


def run_corpus(cases: list[CorpusCase], jobs: int = 1) -> list[dict]:
    """Run every case; groups are dealt to workers whole so lattices are reused."""
    by_group: dict[str, list[int]] = {}
    for i, c in enumerate(cases):
        by_group.setdefault(c.group, []).append(i)
    batches = [[cases[i] for i in idx] for idx in by_group.values()]
    if jobs <= 1:
        chunks = [_run_group(b) for b in batches]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_group, batches))
    results: list = [None] * len(cases)
    for idx, chunk in zip(by_group.values(), chunks):
        for i, r in zip(idx, chunk):
            results[i] = r
    return results


def corpus_json(results: list[dict]) -> str:
    summary = {
        "cases": len(results),
        "passed": sum(r["pass"] for r in results),
        "inconsistent": sum(not r["consistent"] for r in results),
    }
    return json.dumps({"summary": summary, "results": results}, sort_keys=True, indent=2)
