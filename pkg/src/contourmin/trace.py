"""Trace file (schema version 1): a JSON document holding a full run.

Floats are written with ``repr`` precision, which round-trips exactly, so
``dumps(loads(text)) == text`` byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .analysis import ContractionReport, contraction_report
from .decompose import ConvexityTestConfig, Partition
from .engine import IterationRecord, RunConfig, RunResult, Status
from .errors import InsufficientTraceError, TraceFormatError
from .levelset import Root, RootFindConfig

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ResultSummary:
    minimizer: tuple[float, ...]
    minimum_value: float
    status: str
    evaluations_used: int
    n_iterations: int


@dataclass(frozen=True)
class TraceFile:
    schema_version: int
    config: RunConfig
    records: tuple[IterationRecord, ...]
    result: ResultSummary
    contraction: Optional[ContractionReport]

    @classmethod
    def from_run(cls, cfg: RunConfig, result: RunResult) -> "TraceFile":
        try:
            report = contraction_report(result)
        except InsufficientTraceError:
            report = None
        summary = ResultSummary(
            minimizer=result.minimizer,
            minimum_value=result.minimum_value,
            status=Status(result.status).value,
            evaluations_used=result.evaluations_used,
            n_iterations=len(result.iterations),
        )
        return cls(SCHEMA_VERSION, cfg, result.iterations, summary, report)

    def to_run_result(self) -> RunResult:
        return RunResult(
            minimizer=self.result.minimizer,
            minimum_value=self.result.minimum_value,
            iterations=self.records,
            status=Status(self.result.status),
            evaluations_used=self.result.evaluations_used,
        )


def _config_doc(cfg: RunConfig) -> dict:
    return {
        "objective_name": cfg.objective_name,
        "x0": list(cfg.x0),
        "epsilon": cfg.epsilon,
        "max_iterations": cfg.max_iterations,
        "descent_retry_limit": cfg.descent_retry_limit,
        "master_seed": cfg.master_seed,
        "rootfind": asdict(cfg.rootfind),
        "convexity": asdict(cfg.convexity),
    }


def _record_doc(rec: IterationRecord) -> dict:
    return {
        "index": rec.index,
        "level": rec.level,
        "iterate": list(rec.iterate),
        "roots": [
            {
                "point": list(r.point),
                "residual": r.residual,
                "iterate_index": r.iterate_index,
                "root_index": r.root_index,
            }
            for r in rec.roots
        ],
        "partition": {
            "subsets": [list(s) for s in rec.partition.subsets],
            "representative": list(rec.partition.representative),
        },
        "candidate_subsets": list(rec.candidate_subsets),
        "subset_averages": [{"point": list(p), "value": v} for p, v in rec.subset_averages],
        "chosen": list(rec.chosen),
        "chosen_value": rec.chosen_value,
        "retries": rec.retries,
    }


def to_document(trace: TraceFile) -> dict:
    contraction = None
    if trace.contraction is not None:
        c = trace.contraction
        contraction = {
            "proxy": c.proxy,
            "diameters": list(c.diameters),
            "ratios": list(c.ratios),
            "max_ratio": c.max_ratio,
            "geometric_fit": c.geometric_fit,
        }
    return {
        "schema_version": trace.schema_version,
        "config": _config_doc(trace.config),
        "records": [_record_doc(r) for r in trace.records],
        "result": {
            "minimizer": list(trace.result.minimizer),
            "minimum_value": trace.result.minimum_value,
            "status": trace.result.status,
            "evaluations_used": trace.result.evaluations_used,
            "n_iterations": trace.result.n_iterations,
        },
        "contraction": contraction,
    }


def dumps(trace: TraceFile) -> str:
    return json.dumps(to_document(trace), indent=1) + "\n"


def _floats(xs) -> tuple[float, ...]:
    return tuple(float(x) for x in xs)


def _parse_record(d: dict) -> IterationRecord:
    return IterationRecord(
        index=int(d["index"]),
        level=float(d["level"]),
        iterate=_floats(d["iterate"]),
        roots=tuple(
            Root(_floats(r["point"]), float(r["residual"]), int(r["iterate_index"]), int(r["root_index"]))
            for r in d["roots"]
        ),
        partition=Partition(
            tuple(tuple(int(i) for i in s) for s in d["partition"]["subsets"]),
            tuple(int(i) for i in d["partition"]["representative"]),
        ),
        candidate_subsets=tuple(int(i) for i in d["candidate_subsets"]),
        subset_averages=tuple((_floats(a["point"]), float(a["value"])) for a in d["subset_averages"]),
        chosen=_floats(d["chosen"]),
        chosen_value=float(d["chosen_value"]),
        retries=int(d["retries"]),
    )


def from_document(doc: dict) -> TraceFile:
    try:
        version = doc["schema_version"]
        if version != SCHEMA_VERSION:
            raise TraceFormatError(f"unsupported schema_version {version!r}")
        c = doc["config"]
        cfg = RunConfig(
            objective_name=c["objective_name"],
            x0=_floats(c["x0"]),
            epsilon=float(c["epsilon"]),
            max_iterations=int(c["max_iterations"]),
            rootfind=RootFindConfig(**c["rootfind"]),
            convexity=ConvexityTestConfig(**c["convexity"]),
            descent_retry_limit=int(c["descent_retry_limit"]),
            master_seed=int(c["master_seed"]),
        )
        records = tuple(_parse_record(r) for r in doc["records"])
        r = doc["result"]
        result = ResultSummary(
            minimizer=_floats(r["minimizer"]),
            minimum_value=float(r["minimum_value"]),
            status=Status(r["status"]).value,
            evaluations_used=int(r["evaluations_used"]),
            n_iterations=int(r["n_iterations"]),
        )
        contraction = None
        if doc.get("contraction") is not None:
            k = doc["contraction"]
            contraction = ContractionReport(
                diameters=_floats(k["diameters"]),
                ratios=_floats(k["ratios"]),
                max_ratio=float(k["max_ratio"]),
                geometric_fit=float(k["geometric_fit"]),
                proxy=k.get("proxy", "root-set diameter"),
            )
    except TraceFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise TraceFormatError(f"malformed trace: {exc!r}") from exc
    if [rec.index for rec in records] != list(range(len(records))):
        raise TraceFormatError("records must be ordered by iterate index without gaps")
    return TraceFile(version, cfg, records, result, contraction)


def loads(text: str) -> TraceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TraceFormatError("trace must be a JSON object")
    return from_document(doc)


def write(trace: TraceFile, path) -> None:
    Path(path).write_text(dumps(trace))


def read(path) -> TraceFile:
    return loads(Path(path).read_text())


def summary_table(trace: TraceFile) -> str:
    """Fixed-width table: iterate, updating point, height of contour.

    The final row is the returned minimizer, which has no contour of its own.
    """
    rows = [(str(r.index), _fmt_point(r.iterate), f"{r.level:.10f}") for r in trace.records]
    rows.append((str(len(trace.records)), _fmt_point(trace.result.minimizer), ""))
    header = ("iterate", "updating point", "height of contour")
    widths = [max(len(h), *(len(row[k]) for row in rows)) for k, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    lines.append(
        f"status: {trace.result.status}  f(x*) = {trace.result.minimum_value:.10g}  "
        f"evaluations: {trace.result.evaluations_used}"
    )
    return "\n".join(lines) + "\n"


def _fmt_point(p) -> str:
    return "(" + ", ".join(f"{v:.8f}" for v in p) + ")"

