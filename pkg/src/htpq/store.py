"""Append-only JSON-lines log of cylinder certificates.

Each line is one record: kind, polynomial text, condition bits, witness or
reason, timestamp and seed.  Loading re-validates every certificate; corrupt
or invalid lines are reported by line number and skipped.
"""

from __future__ import annotations

import json
import time
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path

from .category import CylinderCertificate, validate_certificate

__all__ = ["AuditEntry", "CertificateStore", "dump_record", "store_append", "store_load"]


def dump_record(rec: dict) -> str:
    """Canonical one-line text of a record."""
    return json.dumps(rec, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


@dataclass(frozen=True)
class AuditEntry:
    line: int
    error: str


@dataclass
class CertificateStore:
    records: list[dict] = field(default_factory=list)
    certificates: list[CylinderCertificate] = field(default_factory=list)
    audit: list[AuditEntry] = field(default_factory=list)

    def index(self) -> dict[tuple[str, str], list[CylinderCertificate]]:
        out: dict[tuple[str, str], list[CylinderCertificate]] = {}
        for rec, cert in zip(self.records, self.certificates):
            out.setdefault((rec["polynomial"], rec["kind"]), []).append(cert)
        return out

    @property
    def ok(self) -> bool:
        return not self.audit


def store_append(path: str | Path, certs: Iterable[CylinderCertificate], *, seed: int | None = None) -> int:
    """Append certificates with a timestamp; returns the number written."""
    lines = []
    for cert in certs:
        rec = cert.to_record()
        rec["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
        rec["seed"] = seed
        lines.append(dump_record(rec) + "\n")
    with open(path, "a", encoding="utf-8") as fh:
        fh.writelines(lines)
    return len(lines)


def store_load(path: str | Path, *, revalidate: bool = True) -> CertificateStore:
    store = CertificateStore()
    seen: dict[tuple[str, str], tuple[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                cert = CylinderCertificate.from_record(rec)
            except (ValueError, KeyError, TypeError, AttributeError) as exc:
                store.audit.append(AuditEntry(lineno, f"corrupt record: {exc}"))
                continue
            if revalidate and not validate_certificate(cert):
                store.audit.append(AuditEntry(lineno, "certificate failed re-validation"))
                continue
            key = (rec["polynomial"], rec["condition"])
            other = seen.get(key)
            if other is not None and other[0] != rec["kind"]:
                store.audit.append(AuditEntry(lineno, f"contradicts the {other[0]} certificate on line {other[1]}"))
                continue
            seen.setdefault(key, (rec["kind"], lineno))
            store.records.append(rec)
            store.certificates.append(cert)
    return store
