"""Check records and deterministic report serialisation.

Reports are JSON documents with a stable field order and no timestamps,
so identical configurations produce byte-identical files.  The CSV
output is a lossy per-record summary of the same run.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field

from . import __version__

# Fixed enumeration of check tags.  Every record carries one; report
# assembly rejects strays so downstream tooling can rely on the set.
CHECK_TAGS = (
    "identity-residual",
    "identity-trace",
    "frame-identity",
    "weakly-einstein-residual",
    "einstein-residual",
    "euler-number",
    "inverse-metric-rate",
    "volume-density-rate",
    "connection-rate",
    "curvature-rate",
    "ricci-rate",
    "scalar-rate",
    "integral-rate-scalar-2d",
    "integral-rate-curv-norm",
    "integral-rate-ricci-norm",
    "integral-rate-tau-sq",
    "integral-rate-gauss-bonnet",
    "chern-zero-patterns",
    "chern-expansion",
    "singer-thorpe",
    "three-dim-reconstruction",
    "three-dim-norm",
    "three-dim-norm-sq",
    "catalog-entry",
)

# Conventions echoed into every report header.  The Laplacian sign is
# the one choice downstream consumers most often need to re-derive.
CONVENTIONS = {
    "riemann": "R(X,Y)Z = ([nabla_X, nabla_Y] - nabla_[X,Y]) Z; "
    "R_ijkl lowers the last slot; unit-radius round 4-sphere has "
    "scalar curvature +12",
    "ricci": "rho_jk contracts the first and last slots of R_ijk^l",
    "laplacian": "Delta = g^{ab} nabla_a nabla_b (non-negative spectrum "
    "on flat tori has Delta cos = -cos)",
    "volume": "sqrt|det g| in chart coordinates",
}


@dataclass
class CheckRecord:
    """Outcome of one named check."""

    check_id: str
    tag: str
    value: float
    tolerance: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tag not in CHECK_TAGS:
            raise ValueError(f"unknown check tag {self.tag!r}")

    def as_dict(self):
        out = {
            "check_id": self.check_id,
            "tag": self.tag,
            "value": _clean_number(self.value),
            "tolerance": _clean_number(self.tolerance),
            "passed": bool(self.passed),
        }
        if self.detail:
            out["detail"] = _clean_tree(self.detail)
        return out


def _clean_number(x):
    x = float(x)
    if x != x or x in (float("inf"), float("-inf")):
        return repr(x)
    return x


def _clean_tree(obj):
    if isinstance(obj, dict):
        return {str(k): _clean_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean_tree(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    return _clean_number(obj)


def config_digest(config: dict) -> str:
    """Short stable digest of the effective configuration."""
    blob = json.dumps(_clean_tree(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


@dataclass
class Report:
    """A full run: config echo, conventions, records, summary."""

    command: str
    config: dict
    records: list

    def __post_init__(self):
        self.records = list(self.records)

    @property
    def passed_count(self):
        return sum(1 for r in self.records if r.passed)

    @property
    def failed_count(self):
        return len(self.records) - self.passed_count

    @property
    def all_passed(self):
        return self.failed_count == 0

    def as_dict(self):
        return {
            "version": __version__,
            "command": self.command,
            "config": _clean_tree(self.config),
            "config_digest": config_digest(self.config),
            "conventions": CONVENTIONS,
            "records": [r.as_dict() for r in self.records],
            "summary": {
                "total": len(self.records),
                "passed": self.passed_count,
                "failed": self.failed_count,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["check_id", "tag", "value", "tolerance", "passed"])
        for r in self.records:
            writer.writerow(
                [r.check_id, r.tag, repr(float(r.value)), repr(float(r.tolerance)),
                 "pass" if r.passed else "fail"]
            )
        return buf.getvalue()

    def exit_code(self) -> int:
        return 0 if self.all_passed else 1
