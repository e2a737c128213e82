"""On-disk policy documents and matrix exports.

The policy document is a JSON file (``.policy.json``) declaring the
attribute schema, the rights universe, the entities, the precedent
sequence, and engine settings. Parsing is total: malformed input yields
a :class:`PolicyError` carrying the complete list of issues with field
locations, never a partial document. Serialization is deterministic;
equal inputs produce byte-identical output.

Matrix exports come in two flavours: ``table`` renders the grid with
explicit cells in square brackets, chain-derived cells in angle
brackets, and undefined cells as ``?``; ``structured`` is a JSON
document (``.matrix.json``) carrying full per-cell provenance and
round-trips through :func:`parse_matrix`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import engine
from .engine import (
    AccessMatrix,
    Candidate,
    CellState,
    Defeated,
    ExplicitCell,
    ImplicitCell,
    Provenance,
    SourceRef,
    UndefinedCell,
)
from .model import (
    ALLOW,
    DENY,
    DOMINANCE_DEPTHS,
    LEXICOGRAPHIC,
    OBJECT,
    SUBJECT,
    AttributeFamily,
    AttributeSchema,
    Decision,
    EntityProfile,
    PolicyUniverse,
    check_universe,
)
from .precedents import REJECT_NEW, STRATEGIES, Outcome, Precedent, PrecedentLog

POLICY_VERSION = 1
MATRIX_FORMAT = "dacmatrix.matrix/1"

FORMAT_TABLE = "table"
FORMAT_STRUCTURED = "structured"


@dataclass(frozen=True)
class PolicyIssue:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class PolicyError(ValueError):
    """Raised with the complete issue list when a document is invalid."""

    def __init__(self, issues: list[PolicyIssue]):
        super().__init__("; ".join(str(i) for i in issues))
        self.issues = issues


@dataclass(frozen=True)
class PolicySettings:
    mode: str = engine.PARTIAL
    collision_strategy: str = REJECT_NEW
    dominance_depth: str = LEXICOGRAPHIC
    default_policy: str = "deny"


@dataclass(frozen=True)
class PolicyDocument:
    schema: AttributeSchema
    rights: tuple[str, ...]
    subjects: tuple[EntityProfile, ...]
    objects: tuple[EntityProfile, ...]
    precedents: tuple[Precedent, ...]
    settings: PolicySettings

    def universe(self) -> PolicyUniverse:
        return PolicyUniverse.build(
            self.schema, self.rights, list(self.subjects), list(self.objects)
        )


def build_log(doc: PolicyDocument, universe: PolicyUniverse | None = None,
              strategy: str | None = None) -> tuple[PrecedentLog, list[Outcome]]:
    """Replay the document's precedents through a fresh log."""
    log = PrecedentLog(universe or doc.universe(), strategy or doc.settings.collision_strategy)
    outcomes = [
        log.apply(p.subject_id, p.object_id, p.decision, note=p.note) for p in doc.precedents
    ]
    return log, outcomes


# -- policy document parsing ------------------------------------------


def parse_policy(text: str) -> PolicyDocument:
    """Parse and fully validate a policy document.

    Raises :class:`PolicyError` with every problem found; returns a
    validated document otherwise.
    """
    issues: list[PolicyIssue] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PolicyError([PolicyIssue(f"line {e.lineno} column {e.colno}", e.msg)]) from None
    if not isinstance(raw, dict):
        raise PolicyError([PolicyIssue("document", "top level must be a JSON object")])

    known = {
        "version", "rights", "subject_attributes", "object_attributes",
        "subjects", "objects", "precedents", "settings",
    }
    for key in raw:
        if key not in known:
            issues.append(PolicyIssue(key, "unknown field"))
    for key in ("rights", "subject_attributes", "object_attributes",
                "subjects", "objects", "precedents"):
        if key not in raw:
            issues.append(PolicyIssue(key, "required field is missing"))
    if raw.get("version") != POLICY_VERSION:
        issues.append(PolicyIssue("version", f"expected {POLICY_VERSION}"))

    rights = _parse_rights(raw.get("rights", []), issues)
    subject_families = _parse_families(raw.get("subject_attributes", []),
                                       "subject_attributes", issues)
    object_families = _parse_families(raw.get("object_attributes", []),
                                      "object_attributes", issues)
    schema = AttributeSchema(subject_families, object_families)
    subjects = _parse_entities(raw.get("subjects", []), "subjects", SUBJECT, issues)
    objects = _parse_entities(raw.get("objects", []), "objects", OBJECT, issues)

    for message in check_universe(schema, rights, list(subjects), list(objects)):
        issues.append(PolicyIssue("policy", message))

    declared = {p.id: p for p in subjects + objects}
    precedents = _parse_precedents(raw.get("precedents", []), rights, declared, issues)
    settings = _parse_settings(raw.get("settings", {}), issues)

    if issues:
        raise PolicyError(issues)
    return PolicyDocument(schema, rights, subjects, objects, precedents, settings)


def _parse_rights(raw, issues: list[PolicyIssue]) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(r, str) and r for r in raw):
        issues.append(PolicyIssue("rights", "must be a list of non-empty strings"))
        return ()
    return tuple(raw)


def _parse_families(raw, where: str, issues: list[PolicyIssue]) -> tuple[AttributeFamily, ...]:
    if not isinstance(raw, list):
        issues.append(PolicyIssue(where, "must be a list"))
        return ()
    out = []
    for i, item in enumerate(raw):
        loc = f"{where}[{i}]"
        if not isinstance(item, dict):
            issues.append(PolicyIssue(loc, "must be an object"))
            continue
        name = item.get("name")
        domain = item.get("domain")
        if not isinstance(name, str) or not name:
            issues.append(PolicyIssue(loc, "family name must be a non-empty string"))
            continue
        if (not isinstance(domain, list)
                or not all(isinstance(v, str) and v for v in domain)):
            issues.append(PolicyIssue(loc, "domain must be a list of non-empty strings"))
            continue
        out.append(AttributeFamily(name=name, domain=tuple(domain)))
    return tuple(out)


def _parse_entities(raw, where: str, kind: str, issues: list[PolicyIssue]) -> tuple[EntityProfile, ...]:
    if not isinstance(raw, list):
        issues.append(PolicyIssue(where, "must be a list"))
        return ()
    out = []
    for i, item in enumerate(raw):
        loc = f"{where}[{i}]"
        if not isinstance(item, dict):
            issues.append(PolicyIssue(loc, "must be an object"))
            continue
        entity_id = item.get("id")
        values = item.get("values")
        if not isinstance(entity_id, str) or not entity_id:
            issues.append(PolicyIssue(loc, "id must be a non-empty string"))
            continue
        if not isinstance(values, list) or not all(isinstance(v, str) for v in values):
            issues.append(PolicyIssue(loc, "values must be a list of strings"))
            continue
        out.append(EntityProfile(id=entity_id, kind=kind, values=tuple(values)))
    return tuple(out)


def _parse_precedents(raw, rights: tuple[str, ...], declared: dict,
                      issues: list[PolicyIssue]) -> tuple[Precedent, ...]:
    if not isinstance(raw, list):
        issues.append(PolicyIssue("precedents", "must be a list"))
        return ()
    out = []
    for i, item in enumerate(raw):
        loc = f"precedents[{i}]"
        if not isinstance(item, dict):
            issues.append(PolicyIssue(loc, "must be an object"))
            continue
        ok = True
        for key in item:
            if key not in ("subject", "object", "effect", "rights", "note"):
                issues.append(PolicyIssue(f"{loc}.{key}", "unknown field"))
        subject = item.get("subject")
        obj = item.get("object")
        for label, value, kind in (("subject", subject, SUBJECT), ("object", obj, OBJECT)):
            profile = declared.get(value) if isinstance(value, str) else None
            if profile is None:
                issues.append(PolicyIssue(f"{loc}.{label}", f"unknown {label}: {value!r}"))
                ok = False
            elif profile.kind != kind:
                issues.append(PolicyIssue(f"{loc}.{label}", f"{value!r} is not a {label}"))
                ok = False
        effect = item.get("effect")
        if effect not in (ALLOW, DENY):
            issues.append(PolicyIssue(f"{loc}.effect", f"must be {ALLOW!r} or {DENY!r}"))
            ok = False
        prights = item.get("rights")
        if (not isinstance(prights, list) or not prights
                or not all(isinstance(r, str) for r in prights)):
            issues.append(PolicyIssue(f"{loc}.rights", "empty rights set"))
            ok = False
        else:
            unknown = set(prights) - set(rights)
            if unknown:
                issues.append(PolicyIssue(
                    f"{loc}.rights", f"unknown right name: {sorted(unknown)}"))
                ok = False
        note = item.get("note")
        if note is not None and not isinstance(note, str):
            issues.append(PolicyIssue(f"{loc}.note", "must be a string"))
            ok = False
        if ok:
            out.append(Precedent(
                subject_id=subject,
                object_id=obj,
                decision=Decision(effect=effect, rights=frozenset(prights)),
                seq=i + 1,
                note=note,
            ))
    return tuple(out)


def _parse_settings(raw, issues: list[PolicyIssue]) -> PolicySettings:
    if not isinstance(raw, dict):
        issues.append(PolicyIssue("settings", "must be an object"))
        return PolicySettings()
    defaults = PolicySettings()
    mode = raw.get("mode", defaults.mode)
    strategy = raw.get("collision_strategy", defaults.collision_strategy)
    depth = raw.get("dominance_depth", defaults.dominance_depth)
    default_policy = raw.get("default_policy", defaults.default_policy)
    for key in raw:
        if key not in ("mode", "collision_strategy", "dominance_depth", "default_policy"):
            issues.append(PolicyIssue(f"settings.{key}", "unknown field"))
    if mode not in engine.MODES:
        issues.append(PolicyIssue("settings.mode", f"must be one of {list(engine.MODES)}"))
        mode = defaults.mode
    if strategy not in STRATEGIES:
        issues.append(PolicyIssue(
            "settings.collision_strategy", f"must be one of {list(STRATEGIES)}"))
        strategy = defaults.collision_strategy
    if depth not in DOMINANCE_DEPTHS:
        issues.append(PolicyIssue(
            "settings.dominance_depth", f"must be one of {list(DOMINANCE_DEPTHS)}"))
        depth = defaults.dominance_depth
    if default_policy != "deny":
        issues.append(PolicyIssue("settings.default_policy", 'only "deny" is supported'))
        default_policy = "deny"
    return PolicySettings(mode, strategy, depth, default_policy)


# -- policy document serialization -------------------------------------


def policy_to_dict(doc: PolicyDocument) -> dict:
    return {
        "version": POLICY_VERSION,
        "rights": list(doc.rights),
        "subject_attributes": [
            {"name": f.name, "domain": list(f.domain)} for f in doc.schema.subject_families
        ],
        "object_attributes": [
            {"name": f.name, "domain": list(f.domain)} for f in doc.schema.object_families
        ],
        "subjects": [{"id": p.id, "values": list(p.values)} for p in doc.subjects],
        "objects": [{"id": p.id, "values": list(p.values)} for p in doc.objects],
        "precedents": [_precedent_to_dict(p) for p in doc.precedents],
        "settings": {
            "mode": doc.settings.mode,
            "collision_strategy": doc.settings.collision_strategy,
            "dominance_depth": doc.settings.dominance_depth,
            "default_policy": doc.settings.default_policy,
        },
    }


def _precedent_to_dict(p: Precedent) -> dict:
    out = {
        "subject": p.subject_id,
        "object": p.object_id,
        "effect": p.decision.effect,
        "rights": sorted(p.decision.rights),
    }
    if p.note is not None:
        out["note"] = p.note
    return out


def serialize_policy(doc: PolicyDocument) -> str:
    return json.dumps(policy_to_dict(doc), indent=2, ensure_ascii=False) + "\n"


# -- matrix serialization ----------------------------------------------


def decision_token(decision: Decision, single_right: bool) -> str:
    if single_right:
        return "1" if decision.effect == ALLOW else "0"
    sign = "+" if decision.effect == ALLOW else "-"
    return sign + ",".join(sorted(decision.rights))


def cell_token(matrix: AccessMatrix, cell: CellState) -> str:
    """Display token for one cell, using the grid conventions:

    explicit in square brackets, chain-derived in angle brackets,
    undefined as ``?``.
    """
    single = matrix.single_right
    if isinstance(cell, ExplicitCell):
        inner = "|".join(sorted(decision_token(d, single) for d in cell.decisions))
        return f"[{inner}]"
    if isinstance(cell, ImplicitCell):
        token = decision_token(cell.decision, single)
        if engine.is_derived(matrix, cell):
            return f">{token}<"
        return token
    return "?"


def matrix_tokens(matrix: AccessMatrix) -> list[list[str]]:
    return [
        [cell_token(matrix, matrix.cells[(sid, oid)]) for oid in matrix.objects]
        for sid in matrix.subjects
    ]


def _source_to_dict(ref: SourceRef) -> dict:
    out = {
        "type": ref.kind,
        "subject": ref.subject_id,
        "object": ref.object_id,
        "effect": ref.decision.effect,
        "rights": sorted(ref.decision.rights),
    }
    if ref.note is not None:
        out["note"] = ref.note
    return out


def _source_from_dict(raw: dict) -> SourceRef:
    return SourceRef(
        kind=raw["type"],
        subject_id=raw["subject"],
        object_id=raw["object"],
        decision=Decision(effect=raw["effect"], rights=frozenset(raw["rights"])),
        note=raw.get("note"),
    )


def cell_to_dict(matrix: AccessMatrix, sid: str, oid: str) -> dict:
    cell = matrix.cells[(sid, oid)]
    base = {"subject": sid, "object": oid}
    if isinstance(cell, ExplicitCell):
        base["state"] = "explicit"
        base["precedents"] = [_source_to_dict(p) for p in cell.precedents]
    elif isinstance(cell, ImplicitCell):
        prov = cell.provenance
        base["state"] = "implicit"
        base["decision"] = {
            "effect": cell.decision.effect,
            "rights": sorted(cell.decision.rights),
        }
        base["derived"] = engine.is_derived(matrix, cell)
        base["provenance"] = {
            "rule": prov.rule,
            "source": _source_to_dict(prov.source),
            "key": list(prov.key),
            "families": list(prov.families),
            "tie_consistent": prov.tie_consistent,
            "defeated": [
                {
                    "source": _source_to_dict(d.source),
                    "key": list(d.key),
                    "families": list(d.families),
                    "via": d.via,
                }
                for d in prov.defeated
            ],
        }
    else:
        base["state"] = "undefined"
        base["reason"] = cell.reason
        base["candidates"] = [
            {
                "source": _source_to_dict(c.source),
                "key": list(c.key),
                "families": list(c.families),
            }
            for c in cell.candidates
        ]
    return base


def matrix_to_dict(matrix: AccessMatrix) -> dict:
    return {
        "format": MATRIX_FORMAT,
        "mode": matrix.mode,
        "dominance_depth": matrix.dominance_depth,
        "default_policy": matrix.default_policy,
        "rights": list(matrix.rights),
        "subjects": list(matrix.subjects),
        "objects": list(matrix.objects),
        "cells": [
            cell_to_dict(matrix, sid, oid)
            for sid in matrix.subjects
            for oid in matrix.objects
        ],
    }


def render_table(matrix: AccessMatrix) -> str:
    tokens = matrix_tokens(matrix)
    header = [""] + list(matrix.objects)
    rows = [[sid] + row for sid, row in zip(matrix.subjects, tokens)]
    widths = [
        max(len(line[col]) for line in [header] + rows)
        for col in range(len(header))
    ]
    lines = []
    for line in [header] + rows:
        lines.append("  ".join(cell.rjust(widths[i]) for i, cell in enumerate(line)).rstrip())
    return "\n".join(lines) + "\n"


def serialize_matrix(matrix: AccessMatrix, fmt: str = FORMAT_STRUCTURED) -> str:
    """Render a matrix as grid text or a structured JSON document."""
    if fmt == FORMAT_TABLE:
        return render_table(matrix)
    if fmt == FORMAT_STRUCTURED:
        return json.dumps(matrix_to_dict(matrix), indent=2, ensure_ascii=False) + "\n"
    raise ValueError(f"unknown matrix format: {fmt!r}")


def parse_matrix(text: str) -> AccessMatrix:
    """Rebuild a matrix from its structured serialization."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise PolicyError([PolicyIssue(f"line {e.lineno} column {e.colno}", e.msg)]) from None
    if not isinstance(raw, dict) or raw.get("format") != MATRIX_FORMAT:
        raise PolicyError([PolicyIssue("format", f"expected {MATRIX_FORMAT!r}")])
    try:
        cells: dict[tuple[str, str], CellState] = {}
        for item in raw["cells"]:
            coord = (item["subject"], item["object"])
            state = item["state"]
            if state == "explicit":
                cells[coord] = ExplicitCell(
                    precedents=tuple(_source_from_dict(p) for p in item["precedents"])
                )
            elif state == "implicit":
                prov = item["provenance"]
                cells[coord] = ImplicitCell(
                    decision=Decision(
                        effect=item["decision"]["effect"],
                        rights=frozenset(item["decision"]["rights"]),
                    ),
                    provenance=Provenance(
                        rule=prov["rule"],
                        source=_source_from_dict(prov["source"]),
                        key=tuple(prov["key"]),
                        families=tuple(prov["families"]),
                        tie_consistent=prov["tie_consistent"],
                        defeated=tuple(
                            Defeated(
                                source=_source_from_dict(d["source"]),
                                key=tuple(d["key"]),
                                families=tuple(d["families"]),
                                via=d["via"],
                            )
                            for d in prov["defeated"]
                        ),
                    ),
                )
            elif state == "undefined":
                cells[coord] = UndefinedCell(
                    reason=item["reason"],
                    candidates=tuple(
                        Candidate(
                            source=_source_from_dict(c["source"]),
                            key=tuple(c["key"]),
                            families=tuple(c["families"]),
                        )
                        for c in item["candidates"]
                    ),
                )
            else:
                raise PolicyError([PolicyIssue("cells", f"unknown cell state: {state!r}")])
        return AccessMatrix(
            mode=raw["mode"],
            dominance_depth=raw["dominance_depth"],
            default_policy=raw["default_policy"],
            rights=tuple(raw["rights"]),
            subjects=tuple(raw["subjects"]),
            objects=tuple(raw["objects"]),
            cells=cells,
        )
    except PolicyError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise PolicyError([PolicyIssue("matrix", f"malformed matrix document: {e}")]) from None


# -- audit export -------------------------------------------------------


def audit_records(log: PrecedentLog) -> list[dict]:
    records = []
    for event in log.events():
        records.append({
            "seq": event.seq,
            "at": event.at,
            "event": event.event,
            "subject": event.precedent.subject_id,
            "object": event.precedent.object_id,
            "effect": event.precedent.decision.effect,
            "rights": sorted(event.precedent.decision.rights),
            "note": event.precedent.note,
            "detail": event.detail,
        })
    for record in log.collisions():
        records.append({
            "event": "collision",
            "collision_id": record.collision_id,
            "old": _precedent_to_dict(record.old),
            "new": _precedent_to_dict(record.new),
            "detected_at": record.detected_at,
            "resolution": record.resolution,
        })
    return records


def export_audit(log: PrecedentLog) -> str:
    payload = {"strategy": log.strategy, "records": audit_records(log)}
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
