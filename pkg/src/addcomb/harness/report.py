"""Suite reports and their JSON/CSV forms."""

from __future__ import annotations

import csv
import hashlib
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .. import canonical

REPORT_SCHEMA = "addcomb-report/1"
STATUSES = ("pass", "fail", "NA")


def digest(inputs) -> str:
    """Short sha256 of the canonical JSON form of an instance's inputs."""
    text = canonical.dumps(inputs, indent=None)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _as_float(x) -> float:
    if isinstance(x, Fraction):
        return float(x)
    try:
        return float(x)
    except OverflowError:
        return math.copysign(math.inf, x)


def relative_margin(lhs, rhs, relation: str, tol: float = 0.0) -> float | None:
    """Signed slack of an instance; negative means the relation is violated."""
    if lhs is None or rhs is None:
        return None
    if relation == "<=":
        if isinstance(lhs, int) and isinstance(rhs, int):
            return float(Fraction(rhs - lhs, max(abs(lhs), abs(rhs), 1)))
        scale = max(abs(_as_float(lhs)), abs(_as_float(rhs)), 1.0)
        return (_as_float(rhs) - _as_float(lhs)) / scale
    if relation == "==":
        if lhs == rhs:
            return 0.0
        if isinstance(lhs, int) and isinstance(rhs, int):
            return -float(Fraction(abs(rhs - lhs), max(abs(lhs), abs(rhs), 1)))
        scale = max(abs(_as_float(lhs)), abs(_as_float(rhs)), 1.0)
        return -abs(_as_float(lhs) - _as_float(rhs)) / scale
    if relation == "~=":
        scale = max(abs(_as_float(lhs)), abs(_as_float(rhs)), 1e-300)
        return tol - abs(_as_float(lhs) - _as_float(rhs)) / scale
    return None


@dataclass
class Instance:
    digest: str
    label: str
    status: str
    lhs: object = None
    rhs: object = None
    relation: str | None = None
    margin: float | None = None
    measured_exponent: float | None = None
    reason: str | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"digest": self.digest, "label": self.label, "status": self.status}
        for key in ("relation", "lhs", "rhs", "margin", "measured_exponent", "reason"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.extra:
            out["extra"] = self.extra
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        return cls(d["digest"], d["label"], d["status"], d.get("lhs"), d.get("rhs"),
                   d.get("relation"), d.get("margin"), d.get("measured_exponent"),
                   d.get("reason"), d.get("extra", {}))


@dataclass
class Report:
    suite: str
    check: str
    kind: str  # "exact", "numeric" or "measured"
    instances: list[Instance] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)
    table: list[dict] | None = None
    table_columns: list[str] | None = None

    def add(self, label: str, inputs: dict, *, lhs=None, rhs=None, relation: str | None = None,
            ok: bool | None = None, tol: float = 0.0, measured_exponent: float | None = None,
            reason: str | None = None, status: str | None = None, **extra) -> Instance:
        """Record one instance; ``ok`` decides pass/fail, None means NA."""
        if status is None:
            status = "NA" if ok is None else ("pass" if ok else "fail")
        if status not in STATUSES:
            raise ValueError(f"bad status {status!r}")
        margin = relative_margin(lhs, rhs, relation, tol) if relation and status != "NA" else None
        inst = Instance(digest({"suite": self.suite, "label": label, "inputs": inputs}), label, status,
                        lhs, rhs, relation, margin, measured_exponent, reason, extra)
        self.instances.append(inst)
        return inst

    @property
    def pass_count(self) -> int:
        return sum(i.status == "pass" for i in self.instances)

    @property
    def fail_count(self) -> int:
        return sum(i.status == "fail" for i in self.instances)

    @property
    def na_count(self) -> int:
        return sum(i.status == "NA" for i in self.instances)

    def summary(self) -> dict:
        margins = [i.margin for i in self.instances if i.margin is not None and i.status != "NA"]
        return {
            "pass_count": self.pass_count,
            "fail_count": self.fail_count,
            "na_count": self.na_count,
            "min_margin": min(margins) if margins else None,
        }

    def sorted_instances(self) -> list[Instance]:
        return sorted(self.instances, key=lambda i: (i.digest, i.label))

    def to_dict(self) -> dict:
        out = {
            "schema": REPORT_SCHEMA,
            "suite": self.suite,
            "check": self.check,
            "kind": self.kind,
            "summary": self.summary(),
            "instances": [i.to_dict() for i in self.sorted_instances()],
            "provenance": self.provenance,
        }
        if self.table is not None:
            out["table_columns"] = self.table_columns
            out["table"] = self.table
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        rep = cls(d["suite"], d["check"], d["kind"],
                  [Instance.from_dict(i) for i in d.get("instances", [])],
                  d.get("provenance", {}), d.get("table"), d.get("table_columns"))
        return rep


def to_json(report: Report) -> str:
    return canonical.dumps(report.to_dict()) + "\n"


def from_json(text: str) -> Report:
    return Report.from_dict(canonical.loads(text))


def _cell(x) -> str:
    x = canonical.normalize(x)
    if x is None:
        return ""
    if isinstance(x, float):
        return canonical._float_text(x).strip('"')
    if isinstance(x, (dict, list)):
        return canonical.dumps(x, indent=None)
    return str(x)


INSTANCE_COLUMNS = ["suite", "digest", "label", "status", "relation", "lhs", "rhs", "margin",
                    "measured_exponent", "reason"]


def to_csv(report: Report) -> str:
    """The report's table when it has one (e.g. the restriction trend), else its instances."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if report.table is not None:
        cols = report.table_columns or (list(report.table[0]) if report.table else [])
        writer.writerow(cols)
        for row in report.table:
            writer.writerow([_cell(row.get(c)) for c in cols])
    else:
        writer.writerow(INSTANCE_COLUMNS)
        for inst in report.sorted_instances():
            d = inst.to_dict()
            writer.writerow([_cell(report.suite)] + [_cell(d.get(c)) for c in INSTANCE_COLUMNS[1:]])
    return buf.getvalue()


def emit(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    raise ValueError(f"unknown format {fmt!r}")
