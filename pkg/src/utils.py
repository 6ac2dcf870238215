import json
import logging
import operator
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd

from src.app_config import WITNESS_KINDS
from src.errors import ParseError, ShapeError
from src.hassett import (
    LabelledSublattice,
    RationalLoci,
    SweepSummary,
    Witness,
    WitnessReport,
    failed_checks,
    user_witness,
)
from src.lattice_core import AMBIENT_CONVENTION, RANK

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Report documents
# ---------------------------------------------------------------------------
def _dec(x: Optional[int]) -> Optional[str]:
    return None if x is None else str(x)


def _dec_matrix(rows) -> List[List[str]]:
    return [[str(x) for x in row] for row in rows]


def report_to_dict(report: WitnessReport) -> Dict[str, Any]:
    """JSON-ready witness report. Gram entries and determinants are decimal strings."""
    return {
        "kind": report.kind,
        "d1": report.d1,
        "d2": report.d2,
        "case": report.case,
        "basis": [list(row) for row in report.basis],
        "gram": _dec_matrix(report.gram),
        "signature": list(report.signature),
        "positive_definite": report.positive_definite,
        "saturated_in_L": report.saturated_in_L,
        "contains_h2": report.contains_h2,
        "h_coords": None if report.h_coords is None else list(report.h_coords),
        "represents_two": report.represents_two,
        "min_norm": report.min_norm,
        "det_m": _dec(report.det_m),
        "expected_det": _dec(report.expected_det),
        "codimension": report.codimension,
        "sub_reports": [
            {
                "name": s.name,
                "coords": [list(row) for row in s.coords],
                "gram": _dec_matrix(s.gram),
                "det": _dec(s.det),
                "discriminant": _dec(s.discriminant),
                "saturated_in_parent": s.saturated_in_parent,
            }
            for s in report.sub_reports
        ],
        "obstruction": report.obstruction,
        "failed_checks": failed_checks(report),
        "pass": report.passed,
    }


def rational_loci_to_dict(loci: RationalLoci) -> Dict[str, Any]:
    return {
        "d": loci.d,
        "determinants": [str(x) for x in loci.determinants],
        "distinct": loci.distinct,
        "reports": [report_to_dict(r) for r in loci.reports],
        "pass": loci.passed,
    }


def sweep_to_dict(summary: SweepSummary) -> Dict[str, Any]:
    return {
        "max_d": summary.max_d,
        "values": list(summary.values),
        "pairs_checked": summary.pairs_checked,
        "case_tallies": {str(case): n for case, n in summary.case_tallies.items()},
        "failures": [
            {"kind": row.kind, "d1": row.d1, "d2": row.d2, "failed_checks": list(row.failures)}
            for row in summary.failures
        ],
        "pass": summary.passed,
    }


def build_document(command: str, inputs: Dict[str, Any], report: Dict[str, Any], schema_version: str) -> Dict[str, Any]:
    return {
        "schema_version": schema_version,
        "command": command,
        "inputs": inputs,
        "ambient_convention": AMBIENT_CONVENTION,
        "report": report,
    }


def dumps_document(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Text rendering
# ---------------------------------------------------------------------------
def _yes(flag: Optional[bool]) -> str:
    return "n/a" if flag is None else ("yes" if flag else "no")


def render_report_text(report: WitnessReport) -> str:
    label = report.kind
    if report.d1 is not None:
        label += f" (d1={report.d1}, d2={report.d2}, case {report.case})"
    lines = [label, "basis:"]
    lines += ["  " + " ".join(str(x) for x in row) for row in report.basis]
    lines.append("gram:")
    lines += ["  " + " ".join(str(x) for x in row) for row in report.gram]
    lines += [
        f"signature: {report.signature}",
        f"positive definite: {_yes(report.positive_definite)}",
        f"saturated in L: {_yes(report.saturated_in_L)}",
        f"contains h2: {_yes(report.contains_h2)}",
        f"represents 2: {_yes(report.represents_two)}",
        f"min norm: {'n/a' if report.min_norm is None else report.min_norm}",
        f"det: {report.det_m}" + ("" if report.expected_det is None else f" (expected {report.expected_det})"),
        f"codimension: {report.codimension}",
    ]
    if report.obstruction:
        lines.append(f"obstruction: {report.obstruction} through h2")
    for s in report.sub_reports:
        gram = "[" + ", ".join("[" + ", ".join(map(str, row)) + "]" for row in s.gram) + "]"
        lines.append(
            f"  {s.name}: gram {gram}, det {s.det} (target {s.discriminant}), "
            f"saturated in M: {_yes(s.saturated_in_parent)}"
        )
    failures = failed_checks(report)
    lines.append("PASS" if report.passed else "FAIL: " + ", ".join(failures))
    return "\n".join(lines) + "\n"


def render_rational_loci_text(loci: RationalLoci) -> str:
    parts = [render_report_text(r) for r in loci.reports]
    parts.append(
        f"determinants: {', '.join(map(str, loci.determinants))} "
        f"({'pairwise distinct' if loci.distinct else 'NOT distinct'})\n"
    )
    parts.append("PASS\n" if loci.passed else "FAIL\n")
    return "\n".join(parts)


def render_sweep_text(summary: SweepSummary) -> str:
    tallies = summary.case_tallies
    lines = [
        f"max d: {summary.max_d} ({len(summary.values)} discriminants)",
        f"pairs checked: {summary.pairs_checked}",
        f"case tallies: case1={tallies[1]} case2={tallies[2]} case3={tallies[3]}",
        f"failures: {len(summary.failures)}",
    ]
    lines += [f"  {row.kind} ({row.d1}, {row.d2}): {', '.join(row.failures)}" for row in summary.failures]
    lines.append("PASS" if summary.passed else "FAIL")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Tables
# ---------------------------------------------------------------------------
def sweep_frame(summary: SweepSummary) -> pd.DataFrame:
    records = [
        {
            "kind": row.kind,
            "d1": row.d1,
            "d2": row.d2,
            "case": row.case,
            "det_m": str(row.det_m),
            "expected_det": "" if row.expected_det is None else str(row.expected_det),
            "min_norm": row.min_norm,
            "pass": row.passed,
            "failed_checks": ";".join(row.failures),
        }
        for row in summary.rows
    ]
    return pd.DataFrame(records, columns=["kind", "d1", "d2", "case", "det_m", "expected_det", "min_norm", "pass", "failed_checks"])


def export_sweep_csv(summary: SweepSummary, path: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    sweep_frame(summary).to_csv(path, index=False, encoding="utf-8")
    logger.info("exported %d sweep rows to %s", len(summary.rows), path)


# ---------------------------------------------------------------------------
# Input files
# ---------------------------------------------------------------------------
def _parse_int_row(text: str, lineno: int) -> List[int]:
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as e:
        raise ParseError(f"line {lineno}: expected integers: {e}") from e


def parse_basis_text(text: str) -> List[List[int]]:
    """Plain basis format: header ``<rank> <width>``, then one vector per line; ``#`` comments."""
    lines = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), start=1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty input: expected a '<rank> <width>' header line")
    header_line, header = lines[0]
    header_values = _parse_int_row(header, header_line)
    if len(header_values) != 2:
        raise ParseError(f"line {header_line}: header must be '<rank> <width>'")
    declared_rank, width = header_values
    if width != RANK:
        raise ShapeError(f"line {header_line}: vectors must be {RANK} wide, header declares {width}")
    rows = []
    for n, line in lines[1:]:
        row = _parse_int_row(line, n)
        if len(row) != RANK:
            raise ShapeError(f"line {n}: vector has {len(row)} entries, expected {RANK}")
        rows.append(row)
    if len(rows) != declared_rank:
        raise ParseError(f"header declares rank {declared_rank} but {len(rows)} vectors follow")
    return rows


def format_basis_text(rows) -> str:
    lines = [f"{len(rows)} {RANK}"] + [" ".join(str(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def _json_int(value: Any) -> int:
    # determinants are written as decimal strings; coordinates as JSON integers
    if isinstance(value, str):
        return int(value)
    if isinstance(value, bool):
        raise TypeError(f"expected an integer, got {value!r}")
    return operator.index(value)


def witness_from_document(document: Dict[str, Any]) -> Witness:
    """Rebuild the witness described by an emitted witness/triple document."""
    report = document.get("report") if isinstance(document, dict) else None
    if not isinstance(report, dict) or "basis" not in report:
        raise ParseError("JSON input must be a witness document with a report.basis field")
    try:
        labels = [
            LabelledSublattice(
                name=s["name"],
                coords=tuple(tuple(operator.index(x) for x in row) for row in s["coords"]),
                discriminant=_json_int(s["discriminant"]),
            )
            for s in report.get("sub_reports", [])
        ]
        expected = report.get("expected_det")
        expected = None if expected is None else _json_int(expected)
        basis = [[operator.index(x) for x in row] for row in report["basis"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed witness document: {e}") from e
    kind = report.get("kind", "user-supplied")
    if kind not in WITNESS_KINDS:
        raise ParseError(f"unknown witness kind {kind!r}; expected one of {WITNESS_KINDS}")
    for i, row in enumerate(basis):
        if len(row) != RANK:
            raise ShapeError(f"basis row {i} has {len(row)} entries, expected {RANK}")
    return user_witness(
        basis,
        labels=labels,
        expected_det=expected,
        kind=kind,
        d1=report.get("d1"),
        d2=report.get("d2"),
        case=report.get("case"),
    )


def read_witness_file(path: str) -> Witness:
    """Read a plain basis file or a JSON witness document (leading ``{``)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e}") from e
    if text.lstrip().startswith("{"):
        try:
            document = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: invalid JSON: {e}") from e
        return witness_from_document(document)
    return user_witness(parse_basis_text(text))


def write_output(text: str, path: Optional[str]) -> None:
    if path is None:
        print(text, end="")
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("wrote %s", path)
