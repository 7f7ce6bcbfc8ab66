"""计算结果的输出: json / csv / table

列固定为: label, length, g, gbar, tau, theta, phi, lambda, epsilon, z，
以及 tau/l, theta/l, phi/l, lambda/l, epsilon/l, z/l。
精确模式原样输出有理数，浮点模式输出 digits 位有效数字。
"""
import csv
import io
import json
from typing import Dict, List, Literal, Optional, Sequence, Tuple

from app.models.models import ComputationResult, MeasureReport
from app.services.arithmetic import Arithmetic
from app.services.invariants import ratios

ReportFormat = Literal["json", "csv", "table"]

VALUE_COLUMNS = ["length", "tau", "theta", "phi", "lambda", "epsilon", "z"]
RATIO_COLUMNS = ["tau/l", "theta/l", "phi/l", "lambda/l", "epsilon/l", "z/l"]
CSV_COLUMNS = ["label", "length", "g", "gbar", "tau", "theta", "phi",
               "lambda", "epsilon", "z"] + RATIO_COLUMNS

ReportRow = Tuple[str, ComputationResult]


def row_payload(label: str, result: ComputationResult,
                arithmetic: Arithmetic, digits: int) -> Dict[str, str]:
    inv = result.invariants
    values = inv.scalar_fields()
    fmt = lambda x: arithmetic.format(x, digits)  # noqa: E731
    payload = {"label": label, "length": fmt(values["length"]),
               "g": str(inv.g), "gbar": str(inv.gbar)}
    for name in VALUE_COLUMNS[1:]:
        payload[name] = fmt(values[name])
    for name, value in ratios(inv).items():
        payload[f"{name}/l"] = fmt(value)
    return payload


def measure_payload(report: Optional[MeasureReport], arithmetic: Arithmetic,
                    digits: int) -> Optional[dict]:
    if report is None:
        return None
    fmt = lambda x: arithmetic.format(x, digits)  # noqa: E731
    return {
        "point_masses": {k: fmt(v) for k, v in report.point_masses.items()},
        "edge_densities": {k: fmt(v) for k, v in report.edge_densities.items()},
        "total_mass": fmt(report.total_mass()),
    }


def _json(rows: Sequence[ReportRow], arithmetic, digits) -> str:
    items = []
    for label, result in rows:
        item = row_payload(label, result, arithmetic, digits)
        if result.canonical is not None:
            item["measures"] = {
                "canonical": measure_payload(result.canonical, arithmetic,
                                             digits),
                "admissible": measure_payload(result.admissible, arithmetic,
                                              digits),
            }
        items.append(item)
    body = items[0] if len(items) == 1 else items
    return json.dumps(body, indent=2, ensure_ascii=False)


def _csv(rows: Sequence[ReportRow], arithmetic, digits) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS,
                            lineterminator="\n")
    writer.writeheader()
    for label, result in rows:
        writer.writerow(row_payload(label, result, arithmetic, digits))
    return buffer.getvalue()


def _table(rows: Sequence[ReportRow], arithmetic, digits) -> str:
    payloads = [row_payload(label, result, arithmetic, digits)
                for label, result in rows]
    header = ["label", "g", "gbar"] + RATIO_COLUMNS + VALUE_COLUMNS
    widths = {h: max([len(h)] + [len(p[h]) for p in payloads])
              for h in header}
    lines = ["  ".join(h.ljust(widths[h]) for h in header),
             "  ".join("-" * widths[h] for h in header)]
    for p in payloads:
        lines.append("  ".join(p[h].ljust(widths[h]) for h in header))

    for label, result in rows:
        for report in (result.canonical, result.admissible):
            if report is None:
                continue
            m = measure_payload(report, arithmetic, digits)
            lines.append("")
            lines.append(f"[{label}] {report.which} measure "
                         f"(total {m['total_mass']})")
            for vid, mass in m["point_masses"].items():
                lines.append(f"  vertex {vid}: {mass}")
            for eid, density in m["edge_densities"].items():
                lines.append(f"  edge {eid}: {density} dx")
    return "\n".join(lines) + "\n"


_EMITTERS = {"json": _json, "csv": _csv, "table": _table}


def emit_report(rows: Sequence[ReportRow], arithmetic: Arithmetic,
                report_format: ReportFormat = "table",
                digits: int = 10) -> str:
    return _EMITTERS[report_format](list(rows), arithmetic, digits)


def parse_csv_report(text: str) -> List[Dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))
