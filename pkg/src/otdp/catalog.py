"""Embedded registry of open industrial malicious-traffic datasets.

Records carry the Cyber Kill Chain attack mapping plus, for the ML-ready
subset, the per-file statistics (selected file, points, features, imbalance
ratio, average complexity score).  The data lives in a human-editable
field-per-line text file shipped with the package and overridable at load
time.
"""

from __future__ import annotations

import difflib
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional

from .errors import CatalogError, UnknownAttackError, UnknownDatasetError

EXPECTED_RECORDS = 32
EXPECTED_ML_READY = 17


class CkcStep(Enum):
    """The seven ordered steps of the Cyber Kill Chain."""

    RECONNAISSANCE = "Reconnaissance"
    WEAPONISATION = "Weaponisation"
    DELIVERY = "Delivery"
    EXPLOITATION = "Exploitation"
    INSTALLATION = "Installation"
    COMMAND_AND_CONTROL = "Command & Control"
    ACTIONS_ON_OBJECTIVES = "Actions on Objectives"


@dataclass(frozen=True)
class AttackSubheading:
    name: str
    step: CkcStep


#: The attack subheadings of the mapping, in kill-chain column order.
#: Weaponisation and Delivery carry none: no catalogued dataset documents
#: attacks for those steps.
SUBHEADINGS: tuple[AttackSubheading, ...] = (
    AttackSubheading("TCP/UDP Port Scan", CkcStep.RECONNAISSANCE),
    AttackSubheading("Modbus/SCADA Scan", CkcStep.RECONNAISSANCE),
    AttackSubheading("OS Fingerprint", CkcStep.RECONNAISSANCE),
    AttackSubheading("Vulnerability Scan", CkcStep.RECONNAISSANCE),
    AttackSubheading("DoS/DDoS", CkcStep.EXPLOITATION),
    AttackSubheading("Injection - Protocol/Data", CkcStep.EXPLOITATION),
    AttackSubheading("Injection - SQL/XSS", CkcStep.EXPLOITATION),
    AttackSubheading("MITM", CkcStep.EXPLOITATION),
    AttackSubheading("PLC Web Service", CkcStep.EXPLOITATION),
    AttackSubheading("Replay", CkcStep.EXPLOITATION),
    AttackSubheading("DNP3", CkcStep.EXPLOITATION),
    AttackSubheading("GOOSE", CkcStep.EXPLOITATION),
    AttackSubheading("S7 Comm", CkcStep.EXPLOITATION),
    AttackSubheading("SCADA/Modbus", CkcStep.EXPLOITATION),
    AttackSubheading("Backdoor", CkcStep.INSTALLATION),
    AttackSubheading("Malware", CkcStep.INSTALLATION),
    AttackSubheading("Brute Force", CkcStep.COMMAND_AND_CONTROL),
    AttackSubheading("Dictionary", CkcStep.COMMAND_AND_CONTROL),
    AttackSubheading("Malicious Insider", CkcStep.COMMAND_AND_CONTROL),
    AttackSubheading("Upload", CkcStep.COMMAND_AND_CONTROL),
    AttackSubheading("Exfiltration", CkcStep.ACTIONS_ON_OBJECTIVES),
    AttackSubheading("Tampering", CkcStep.ACTIONS_ON_OBJECTIVES),
    AttackSubheading("Ransomware", CkcStep.ACTIONS_ON_OBJECTIVES),
)


def _normalize_attack(name: str) -> str:
    out = name.strip().lower()
    for ch in (" ", "\t"):
        out = out.replace(ch, "")
    return out


_SUBHEADING_LOOKUP = {_normalize_attack(s.name): s for s in SUBHEADINGS}


def resolve_attack(name: str) -> AttackSubheading:
    """Find a subheading by name (case/spacing-insensitive); error lists the
    valid names."""
    key = _normalize_attack(name)
    if key in _SUBHEADING_LOOKUP:
        return _SUBHEADING_LOOKUP[key]
    raise UnknownAttackError(name, [s.name for s in SUBHEADINGS])


def resolve_step(name: str) -> CkcStep:
    key = name.strip().lower().replace(" ", "").replace("&", "and")
    for step in CkcStep:
        canonical = step.value.lower().replace(" ", "").replace("&", "and")
        if key in (canonical, step.name.lower().replace("_", "")):
            return step
    valid = ", ".join(s.value for s in CkcStep)
    raise CatalogError(f"unknown kill-chain step {name!r}; valid steps: {valid}")


@dataclass(frozen=True)
class MlReadyStats:
    selected_file: str
    file_format: str
    n_points: int
    n_features: int
    ir: float
    avg_cs: float


@dataclass(frozen=True)
class DatasetRecord:
    id: int
    name: str
    year: int
    scenario: str
    attack_type_count: int
    attack_flags: frozenset[AttackSubheading]
    ml_ready: bool
    stats: Optional[MlReadyStats] = None
    #: year shown in the attack-mapping table when it disagrees with `year`
    ckc_year: Optional[int] = None
    url: Optional[str] = None
    #: which column we treat as the label when analysing this dataset's file;
    #: an annotation of our tooling, not ground truth from the source tables
    label_column: Optional[str] = None

    def steps(self) -> frozenset[CkcStep]:
        return frozenset(flag.step for flag in self.attack_flags)


@dataclass
class Catalog:
    records: tuple[DatasetRecord, ...]
    version: int = 1

    def __post_init__(self):
        self.records = tuple(sorted(self.records, key=lambda r: r.id))
        ids = [r.id for r in self.records]
        if len(self.records) != EXPECTED_RECORDS:
            raise CatalogError(
                f"catalogue corrupt: expected {EXPECTED_RECORDS} records, "
                f"found {len(self.records)}"
            )
        if ids != list(range(1, EXPECTED_RECORDS + 1)):
            raise CatalogError("catalogue corrupt: record ids must be 1..32 without gaps")
        for r in self.records:
            if r.ml_ready != (r.stats is not None):
                raise CatalogError(
                    f"catalogue corrupt: {r.name}: ml-ready flag and stats disagree"
                )
            if r.stats is not None:
                if r.stats.ir < 1:
                    raise CatalogError(f"catalogue corrupt: {r.name}: ir < 1")
                if not 0 <= r.stats.avg_cs <= 1:
                    raise CatalogError(f"catalogue corrupt: {r.name}: avg_cs outside [0,1]")
        n_stats = sum(1 for r in self.records if r.stats is not None)
        if n_stats != EXPECTED_ML_READY:
            raise CatalogError(
                f"catalogue corrupt: expected {EXPECTED_ML_READY} ML-ready records, "
                f"found {n_stats}"
            )

    @property
    def ml_ready_records(self) -> tuple[DatasetRecord, ...]:
        return tuple(r for r in self.records if r.ml_ready)

    def find(self, name: str) -> DatasetRecord:
        wanted = name.strip().lower()
        for r in self.records:
            if r.name.lower() == wanted:
                return r
        matches = difflib.get_close_matches(
            name, [r.name for r in self.records], n=1, cutoff=0.4
        )
        raise UnknownDatasetError(name, matches[0] if matches else None)


@dataclass(frozen=True)
class QueryFilter:
    attack: Optional[str] = None
    step: Optional[CkcStep | str] = None
    year_range: Optional[tuple[int, int]] = None
    scenario_substring: Optional[str] = None
    ml_ready_only: bool = False


def query_datasets(catalog: Catalog, query: QueryFilter = QueryFilter()) -> list[DatasetRecord]:
    """Conjunction of the provided filter clauses, sorted by id."""
    attack = resolve_attack(query.attack) if query.attack is not None else None
    step = None
    if query.step is not None:
        step = query.step if isinstance(query.step, CkcStep) else resolve_step(query.step)
    needle = query.scenario_substring.lower() if query.scenario_substring else None

    out = []
    for r in catalog.records:
        if query.ml_ready_only and not r.ml_ready:
            continue
        if attack is not None and attack not in r.attack_flags:
            continue
        if step is not None and step not in r.steps():
            continue
        if query.year_range is not None:
            lo, hi = query.year_range
            if not lo <= r.year <= hi:
                continue
        if needle is not None and needle not in r.scenario.lower():
            continue
        out.append(r)
    return out


@dataclass(frozen=True)
class CatalogSummary:
    avg_ir: float
    avg_cs: float
    #: counts per CS band: [0,0.1), [0.1,0.2), [0.2,0.3), [0.3,0.4),
    #: [0.4,0.5], then above 0.5
    cs_histogram: tuple[int, int, int, int, int, int]
    ir_values: tuple[float, ...] = field(repr=False)

    def ir_above(self, threshold: float) -> int:
        return sum(1 for ir in self.ir_values if ir > threshold)


def summary_stats(catalog: Catalog) -> CatalogSummary:
    """Aggregates over the ML-ready records."""
    stats = [r.stats for r in catalog.ml_ready_records]
    irs = tuple(s.ir for s in stats)
    css = [s.avg_cs for s in stats]
    hist = [0] * 6
    for cs in css:
        if cs < 0.1:
            hist[0] += 1
        elif cs < 0.2:
            hist[1] += 1
        elif cs < 0.3:
            hist[2] += 1
        elif cs < 0.4:
            hist[3] += 1
        elif cs <= 0.5:
            hist[4] += 1
        else:
            hist[5] += 1
    return CatalogSummary(
        avg_ir=sum(irs) / len(irs),
        avg_cs=sum(css) / len(css),
        cs_histogram=tuple(hist),
        ir_values=irs,
    )


# -- catalogue file ----------------------------------------------------------

_INT_FIELDS = {"id", "year", "ckc-year", "attack-types", "data-points", "features"}
_FLOAT_FIELDS = {"ir", "avg-cs"}
_STATS_FIELDS = ("file", "file-format", "data-points", "features", "ir", "avg-cs")


def parse_catalog_text(text: str) -> Catalog:
    """Parse the field-per-line catalogue format.

    Blocks start with `[dataset]`; `key: value` lines fill the record;
    `attacks:` holds `; `-separated subheading names; blank lines and `#`
    comments are ignored.
    """
    version = 1
    blocks: list[dict[str, str]] = []
    current: dict[str, str] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line == "[dataset]":
            current = {}
            blocks.append(current)
            continue
        if ":" not in line:
            raise CatalogError(f"catalogue line {lineno}: expected 'key: value', got {line!r}")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        value = value.strip()
        if current is None:
            if key == "version":
                version = int(value)
                continue
            raise CatalogError(f"catalogue line {lineno}: field outside a [dataset] block")
        if key in current:
            raise CatalogError(f"catalogue line {lineno}: duplicate field {key!r}")
        current[key] = value

    records = [_record_from_fields(fields) for fields in blocks]
    return Catalog(records=tuple(records), version=version)


def _record_from_fields(fields: dict[str, str]) -> DatasetRecord:
    try:
        rid = int(fields["id"])
        name = fields["name"]
        year = int(fields["year"])
        scenario = fields["scenario"]
        attack_types = int(fields["attack-types"])
    except KeyError as missing:
        raise CatalogError(f"catalogue record missing field {missing}") from None

    attacks = frozenset(
        resolve_attack(part)
        for part in fields.get("attacks", "").split(";")
        if part.strip()
    )
    has_stats = [f for f in _STATS_FIELDS if f in fields]
    stats = None
    if has_stats:
        if len(has_stats) != len(_STATS_FIELDS):
            raise CatalogError(
                f"catalogue record {name!r}: partial stats block "
                f"(has {has_stats}, needs all of {_STATS_FIELDS})"
            )
        stats = MlReadyStats(
            selected_file=fields["file"],
            file_format=fields["file-format"],
            n_points=int(fields["data-points"]),
            n_features=int(fields["features"]),
            ir=float(fields["ir"]),
            avg_cs=float(fields["avg-cs"]),
        )
    return DatasetRecord(
        id=rid,
        name=name,
        year=year,
        scenario=scenario,
        attack_type_count=attack_types,
        attack_flags=attacks,
        ml_ready=stats is not None,
        stats=stats,
        ckc_year=int(fields["ckc-year"]) if "ckc-year" in fields else None,
        url=fields.get("url"),
        label_column=fields.get("label-column"),
    )


def load_catalog(path: str | None = None) -> Catalog:
    """Load the catalogue from `path`, or the embedded default."""
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_catalog_text(fh.read())
    text = resources.files("otdp").joinpath("data/datasets.otcat").read_text("utf-8")
    return parse_catalog_text(text)
