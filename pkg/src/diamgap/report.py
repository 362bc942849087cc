"""Verification reports: a versioned JSON record of what was measured
and which verdicts follow.

Verdicts are pure functions of the measurements, so a saved report can
be replayed offline: recompute the verdict block from the stored
measurements and compare.  Any schema change bumps SCHEMA_VERSION;
loaders reject versions they do not know.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

SCHEMA_VERSION = 1

__all__ = [
    "SCHEMA_VERSION",
    "ReportError",
    "VerifyReport",
    "derive_verdicts",
    "make_report",
    "to_json",
    "from_json",
    "replay",
]


class ReportError(ValueError):
    """Malformed report file or unsupported schema version."""


@dataclass
class VerifyReport:
    version: int
    kind: str
    instance: dict
    measurements: dict
    verdicts: dict
    passed: bool


def derive_verdicts(kind: str, m: dict) -> dict:
    """Recompute the verdict block from measurements alone."""
    k = m.get("k")
    if kind == "verify-small":
        if m["case"] == "no":
            if m["mode"] == "full":
                return {"diameter_at_most_k": m["diameter"] <= k}
            return {"source_eccentricities_at_most_k": m["max_ecc"] <= k}
        dist = m["endpoint_distance"]
        effective = dist if dist is not None else m["levels_checked"] + 1
        return {"endpoint_distance_at_least_2k_minus_1": effective >= 2 * k - 1}
    if kind == "verify-general":
        if m["mode"] == "no-paths":
            return {
                "all_paths_within_k_ops": (
                    m["paths_ok"] == m["pairs"] and m["max_ops"] <= k
                )
            }
        return {"unreached_at_2k_minus_2": not m["reached_at_budget"]}
    raise ReportError(f"unknown report kind {kind!r}")


def make_report(kind: str, instance: dict, measurements: dict) -> VerifyReport:
    verdicts = derive_verdicts(kind, measurements)
    return VerifyReport(
        version=SCHEMA_VERSION,
        kind=kind,
        instance=instance,
        measurements=measurements,
        verdicts=verdicts,
        passed=all(verdicts.values()),
    )


def to_json(report: VerifyReport) -> str:
    return json.dumps(asdict(report), indent=2, sort_keys=True)


def from_json(text: str) -> VerifyReport:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ReportError(f"not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ReportError("report must be a JSON object")
    version = raw.get("version")
    if version != SCHEMA_VERSION:
        raise ReportError(
            f"unsupported report version {version!r}, expected {SCHEMA_VERSION}"
        )
    try:
        return VerifyReport(
            version=version,
            kind=raw["kind"],
            instance=raw["instance"],
            measurements=raw["measurements"],
            verdicts=raw["verdicts"],
            passed=raw["passed"],
        )
    except KeyError as exc:
        raise ReportError(f"missing report field {exc}") from exc


def replay(report: VerifyReport) -> bool:
    """True when the stored verdicts and overall flag reproduce exactly
    from the stored measurements."""
    verdicts = derive_verdicts(report.kind, report.measurements)
    return verdicts == report.verdicts and report.passed == all(verdicts.values())
