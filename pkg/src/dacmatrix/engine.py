"""Access-matrix interpolation from a collision-free precedent set.

Every cell of the matrix is either written explicitly by a precedent,
filled by analogy with one dominant influencing source, or left
undefined. Influence and dominance follow five rules:

1. A precedent reaches only its own row and its own column.
2. It influences a cell in its row when the two objects coincide on at
   least one attribute, and a cell in its column when the two subjects
   coincide on at least one attribute.
3. When a cell is influenced from both its row and its column, the row
   wins outright, because subject attributes outrank object attributes.
4. Among several row influencers the one coinciding on the most
   significant object attribute dominates.
5. Among several column influencers the one coinciding on the most
   significant subject attribute dominates.

Partial interpolation applies the rules once. Sequential interpolation
adds a chain pass: cells filled through their row act in turn as column
sources for the remaining cells (one extra pass only, stage-B results
never propagate further).

Interpolation is a pure function of the admitted set; permuting the
admitted entries can never change the outcome, and ties are resolved
canonically so equal inputs produce identical matrices, provenance
included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    ALLOW,
    LEXICOGRAPHIC,
    OBJECT,
    STRICT_PAPER,
    SUBJECT,
    CoincidenceKey,
    Decision,
    PolicyUniverse,
    coinciding_attributes,
)
from .precedents import Precedent

PARTIAL = "partial"
SEQUENTIAL = "sequential"
MODES = (PARTIAL, SEQUENTIAL)

RULE_ROW = "row"
RULE_COLUMN = "column"
RULE_COLUMN_VIA_DERIVED = "column-via-derived"

NO_INFLUENCE = "no-influence"
AMBIGUOUS = "ambiguous"

SOURCE_PRECEDENT = "precedent"
SOURCE_DERIVED = "derived"
_SOURCE_RANK = {SOURCE_PRECEDENT: 0, SOURCE_DERIVED: 1}


@dataclass(frozen=True)
class SourceRef:
    """A stable reference to whatever determined a cell.

    Either an explicit precedent or a cell derived in the chain pass.
    Notes are display labels and do not take part in equality.
    """

    kind: str  # precedent | derived
    subject_id: str
    object_id: str
    decision: Decision
    note: str | None = field(default=None, compare=False)

    def describe(self, single_right: bool = False) -> str:
        if self.kind == SOURCE_PRECEDENT and self.note:
            return self.note
        if single_right:
            value = "1" if self.decision.effect == ALLOW else "0"
        else:
            sign = "+" if self.decision.effect == ALLOW else "-"
            value = sign + ",".join(sorted(self.decision.rights))
        core = f"({self.subject_id},{self.object_id},{value})"
        return f"derived {core}" if self.kind == SOURCE_DERIVED else core


@dataclass(frozen=True)
class Candidate:
    """An influencing source together with its coincidence evidence."""

    source: SourceRef
    key: CoincidenceKey
    families: tuple[str, ...]


@dataclass(frozen=True)
class Defeated:
    """A candidate that lost the dominance contest, and why.

    ``via`` is one of ``key-order`` (a more significant coincidence
    won), ``key-tie`` (equal key, same decision, canonical pick), or
    ``source-type`` (an explicit precedent beats a derived cell on a
    tie).
    """

    source: SourceRef
    key: CoincidenceKey
    families: tuple[str, ...]
    via: str


@dataclass(frozen=True)
class Provenance:
    rule: str  # row | column | column-via-derived
    source: SourceRef
    key: CoincidenceKey
    families: tuple[str, ...]
    tie_consistent: bool = False
    defeated: tuple[Defeated, ...] = ()


@dataclass(frozen=True)
class ExplicitCell:
    """Cell written by one or more rights-disjoint precedents.

    Never altered by interpolation.
    """

    precedents: tuple[SourceRef, ...]

    @property
    def decisions(self) -> tuple[Decision, ...]:
        return tuple(p.decision for p in self.precedents)


@dataclass(frozen=True)
class ImplicitCell:
    """Cell filled by analogy; the decision is a verbatim copy of its source's."""

    decision: Decision
    provenance: Provenance


@dataclass(frozen=True)
class UndefinedCell:
    """Cell no precedent determines; enforcement falls back to deny-all.

    ``reason`` is ``no-influence`` when nothing reaches the cell and
    ``ambiguous`` when tied candidates disagree; the tied candidates are
    kept so the administrator can see exactly what clashed.
    """

    reason: str
    candidates: tuple[Candidate, ...] = ()


CellState = ExplicitCell | ImplicitCell | UndefinedCell


@dataclass(frozen=True)
class AccessMatrix:
    """The full subject-class by object-class decision table."""

    mode: str
    dominance_depth: str
    default_policy: str
    rights: tuple[str, ...]
    subjects: tuple[str, ...]
    objects: tuple[str, ...]
    cells: dict = field(default_factory=dict)  # (subject_id, object_id) -> CellState

    def cell(self, subject_id: str, object_id: str) -> CellState:
        try:
            return self.cells[(subject_id, object_id)]
        except KeyError:
            raise ValueError(f"unknown cell: ({subject_id}, {object_id})") from None

    @property
    def single_right(self) -> bool:
        return len(self.rights) == 1


@dataclass(frozen=True)
class InfluenceSet:
    """Row-side and column-side influencers of one cell."""

    row: tuple[Candidate, ...]
    column: tuple[Candidate, ...]


@dataclass(frozen=True)
class Selection:
    status: str  # dominant | ambiguous | none
    winner: Candidate | None = None
    tie_consistent: bool = False
    defeated: tuple[Defeated, ...] = ()
    tied: tuple[Candidate, ...] = ()


@dataclass(frozen=True)
class CellDiff:
    subject_id: str
    object_id: str
    before: CellState
    after: CellState


def allowed_rights(cell: CellState) -> frozenset[str]:
    """Rights effectively granted at a cell; undefined means none."""
    if isinstance(cell, ExplicitCell):
        granted: set[str] = set()
        for decision in cell.decisions:
            if decision.effect == ALLOW:
                granted |= decision.rights
        return frozenset(granted)
    if isinstance(cell, ImplicitCell):
        return cell.decision.rights if cell.decision.effect == ALLOW else frozenset()
    return frozenset()


def _candidate_order(c: Candidate) -> tuple:
    return (
        c.key,
        _SOURCE_RANK[c.source.kind],
        c.source.subject_id,
        c.source.object_id,
        c.source.decision.sort_key(),
    )


def select_dominant(candidates: list[Candidate] | tuple[Candidate, ...],
                    depth: str = LEXICOGRAPHIC) -> Selection:
    """Pick the dominant candidate on one side of a cell.

    The maximal candidates under the key ordering are found first. A
    lone maximum wins. On a tie, an explicit precedent beats a derived
    cell; if the survivors all carry the same decision the tie is
    immaterial and the canonical first is chosen (flagged
    ``tie_consistent``); otherwise the selection is ambiguous.
    """
    if not candidates:
        return Selection("none")
    ordered = sorted(candidates, key=_candidate_order)
    if depth == STRICT_PAPER:
        best_head = min(c.key[0] for c in ordered)
        tied = [c for c in ordered if c.key[0] == best_head]
        rest = [c for c in ordered if c.key[0] != best_head]
    else:
        best = ordered[0].key
        tied = [c for c in ordered if c.key == best]
        rest = [c for c in ordered if c.key != best]
    defeated = [Defeated(c.source, c.key, c.families, "key-order") for c in rest]

    if len(tied) > 1:
        kinds = {c.source.kind for c in tied}
        if SOURCE_PRECEDENT in kinds and SOURCE_DERIVED in kinds:
            defeated.extend(
                Defeated(c.source, c.key, c.families, "source-type")
                for c in tied
                if c.source.kind == SOURCE_DERIVED
            )
            tied = [c for c in tied if c.source.kind == SOURCE_PRECEDENT]

    if len(tied) == 1:
        return Selection("dominant", winner=tied[0], defeated=tuple(defeated))

    if len({c.source.decision for c in tied}) == 1:
        winner = tied[0]
        defeated.extend(Defeated(c.source, c.key, c.families, "key-tie") for c in tied[1:])
        return Selection("dominant", winner=winner, tie_consistent=True, defeated=tuple(defeated))

    return Selection(AMBIGUOUS, defeated=tuple(defeated), tied=tuple(tied))


class _Workspace:
    """Per-interpolation lookup tables; the pairwise key tables bound the cost."""

    def __init__(self, universe: PolicyUniverse, admitted: tuple[Precedent, ...]):
        self.universe = universe
        self.subject_reps = universe.subject_reps
        self.object_reps = universe.object_reps
        self.subject_families = universe.schema.family_names(SUBJECT)
        self.object_families = universe.schema.family_names(OBJECT)
        self.subject_keys = self._key_table(self.subject_reps)
        self.object_keys = self._key_table(self.object_reps)

        self.at_cell: dict[tuple[str, str], list[Precedent]] = {}
        self.by_subject: dict[str, list[tuple[Precedent, str]]] = {}
        self.by_object: dict[str, list[tuple[Precedent, str]]] = {}
        for p in admitted:
            srep = universe.rep_id(p.subject_id)
            orep = universe.rep_id(p.object_id)
            self.at_cell.setdefault((srep, orep), []).append(p)
            self.by_subject.setdefault(srep, []).append((p, orep))
            self.by_object.setdefault(orep, []).append((p, srep))

    @staticmethod
    def _key_table(reps) -> dict[tuple[str, str], CoincidenceKey]:
        table: dict[tuple[str, str], CoincidenceKey] = {}
        for a in reps:
            for b in reps:
                if a.id == b.id:
                    continue
                if (b.id, a.id) in table:
                    table[(a.id, b.id)] = table[(b.id, a.id)]
                else:
                    table[(a.id, b.id)] = coinciding_attributes(a, b)
        return table

    def families_for(self, kind: str, key: CoincidenceKey) -> tuple[str, ...]:
        names = self.subject_families if kind == SUBJECT else self.object_families
        return tuple(names[i - 1] for i in key)

    def row_candidates(self, sid: str, oid: str) -> list[Candidate]:
        out = []
        for p, orep in self.by_subject.get(sid, ()):
            if orep == oid:
                continue
            key = self.object_keys[(orep, oid)]
            if key:
                out.append(Candidate(_precedent_ref(p), key, self.families_for(OBJECT, key)))
        return out

    def column_candidates(self, sid: str, oid: str) -> list[Candidate]:
        out = []
        for p, srep in self.by_object.get(oid, ()):
            if srep == sid:
                continue
            key = self.subject_keys[(srep, sid)]
            if key:
                out.append(Candidate(_precedent_ref(p), key, self.families_for(SUBJECT, key)))
        return out

    def explicit_cell(self, sid: str, oid: str) -> ExplicitCell | None:
        here = self.at_cell.get((sid, oid))
        if not here:
            return None
        refs = sorted(
            (_precedent_ref(p) for p in here),
            key=lambda r: (r.subject_id, r.object_id, r.decision.sort_key()),
        )
        return ExplicitCell(precedents=tuple(refs))


def _precedent_ref(p: Precedent) -> SourceRef:
    return SourceRef(SOURCE_PRECEDENT, p.subject_id, p.object_id, p.decision, note=p.note)


def influencers(
    universe: PolicyUniverse,
    admitted: tuple[Precedent, ...] | list[Precedent],
    subject_id: str,
    object_id: str,
    derived: tuple[SourceRef, ...] = (),
) -> InfluenceSet:
    """All sources eligible to determine one cell, split by side.

    A precedent sitting exactly at the cell is excluded; it makes the
    cell explicit instead. ``derived`` adds chain-pass cells as column
    sources.
    """
    ws = _Workspace(universe, tuple(admitted))
    sid = universe.rep_id(subject_id)
    oid = universe.rep_id(object_id)
    column = ws.column_candidates(sid, oid)
    for ref in derived:
        if ref.object_id != oid or ref.subject_id == sid:
            continue
        key = ws.subject_keys[(ref.subject_id, sid)]
        if key:
            column.append(Candidate(ref, key, ws.families_for(SUBJECT, key)))
    return InfluenceSet(
        row=tuple(ws.row_candidates(sid, oid)),
        column=tuple(sorted(column, key=_candidate_order)),
    )


def _decide(selection: Selection, rule: str) -> CellState:
    # Cell state records only the contest that was actually held: when
    # row influencers exist the column side is never consulted, so its
    # candidates are not part of the cell's provenance.
    if selection.status == AMBIGUOUS:
        return UndefinedCell(AMBIGUOUS, candidates=selection.tied)
    winner = selection.winner
    assert winner is not None
    if rule == RULE_COLUMN and winner.source.kind == SOURCE_DERIVED:
        rule = RULE_COLUMN_VIA_DERIVED
    return ImplicitCell(
        decision=winner.source.decision,
        provenance=Provenance(
            rule=rule,
            source=winner.source,
            key=winner.key,
            families=winner.families,
            tie_consistent=selection.tie_consistent,
            defeated=selection.defeated,
        ),
    )


def interpolate(
    universe: PolicyUniverse,
    admitted: tuple[Precedent, ...] | list[Precedent],
    mode: str = PARTIAL,
    depth: str = LEXICOGRAPHIC,
) -> AccessMatrix:
    """Fill the whole matrix from a collision-free admitted set."""
    if mode not in MODES:
        raise ValueError(f"unknown interpolation mode: {mode!r}")
    ws = _Workspace(universe, tuple(admitted))
    cells: dict[tuple[str, str], CellState] = {}
    deferred: list[tuple[str, str]] = []
    derived_by_object: dict[str, list[SourceRef]] = {}

    for s in ws.subject_reps:
        for o in ws.object_reps:
            coord = (s.id, o.id)
            explicit = ws.explicit_cell(s.id, o.id)
            if explicit is not None:
                cells[coord] = explicit
                continue
            row = ws.row_candidates(s.id, o.id)
            if row:
                state = _decide(select_dominant(row, depth), RULE_ROW)
                cells[coord] = state
                if mode == SEQUENTIAL and isinstance(state, ImplicitCell):
                    ref = SourceRef(SOURCE_DERIVED, s.id, o.id, state.decision)
                    derived_by_object.setdefault(o.id, []).append(ref)
            elif mode == PARTIAL:
                column = ws.column_candidates(s.id, o.id)
                if column:
                    cells[coord] = _decide(select_dominant(column, depth), RULE_COLUMN)
                else:
                    cells[coord] = UndefinedCell(NO_INFLUENCE)
            else:
                deferred.append(coord)

    # Chain pass: row-filled cells now act as column sources for the
    # cells their own rules left open. Results of this pass never
    # propagate further.
    for sid, oid in deferred:
        column = ws.column_candidates(sid, oid)
        for ref in derived_by_object.get(oid, ()):
            if ref.subject_id == sid:
                continue
            key = ws.subject_keys[(ref.subject_id, sid)]
            if key:
                column.append(Candidate(ref, key, ws.families_for(SUBJECT, key)))
        if column:
            cells[(sid, oid)] = _decide(select_dominant(column, depth), RULE_COLUMN)
        else:
            cells[(sid, oid)] = UndefinedCell(NO_INFLUENCE)

    return AccessMatrix(
        mode=mode,
        dominance_depth=depth,
        default_policy="deny",
        rights=universe.rights,
        subjects=tuple(s.id for s in ws.subject_reps),
        objects=tuple(o.id for o in ws.object_reps),
        cells=cells,
    )


def partial_interpolate(universe, admitted, depth: str = LEXICOGRAPHIC) -> AccessMatrix:
    return interpolate(universe, admitted, PARTIAL, depth)


def sequential_interpolate(universe, admitted, depth: str = LEXICOGRAPHIC) -> AccessMatrix:
    return interpolate(universe, admitted, SEQUENTIAL, depth)


def is_derived(matrix: AccessMatrix, cell: CellState) -> bool:
    """Chain-pass marker: row-filled cells of a sequential matrix."""
    return (
        matrix.mode == SEQUENTIAL
        and isinstance(cell, ImplicitCell)
        and cell.provenance.rule == RULE_ROW
    )


def summarize(matrix: AccessMatrix) -> dict[str, int]:
    counts = {"explicit": 0, "implicit": 0, "derived": 0, "undefined": 0}
    for cell in matrix.cells.values():
        if isinstance(cell, ExplicitCell):
            counts["explicit"] += 1
        elif isinstance(cell, ImplicitCell):
            counts["implicit"] += 1
            if is_derived(matrix, cell):
                counts["derived"] += 1
        else:
            counts["undefined"] += 1
    return counts


def diff_matrices(a: AccessMatrix, b: AccessMatrix) -> list[CellDiff]:
    """Cells whose state differs between two matrices over the same entities."""
    if a.subjects != b.subjects or a.objects != b.objects:
        raise ValueError("matrices cover different entity sets")
    out: list[CellDiff] = []
    for sid in a.subjects:
        for oid in a.objects:
            ca = a.cells[(sid, oid)]
            cb = b.cells[(sid, oid)]
            if ca != cb:
                out.append(CellDiff(sid, oid, ca, cb))
    return out


@dataclass(frozen=True)
class Explanation:
    """Human- and machine-readable provenance of one cell."""

    subject_id: str
    object_id: str
    mode: str
    cell: CellState
    single_right: bool

    @property
    def defined(self) -> bool:
        return not isinstance(self.cell, UndefinedCell)

    def _effect_word(self, decision: Decision) -> str:
        word = "Allow" if decision.effect == ALLOW else "Deny"
        if self.single_right:
            return word
        return f"{word} {{{','.join(sorted(decision.rights))}}}"

    def summary(self) -> str:
        cell = self.cell
        if isinstance(cell, ExplicitCell):
            names = ", ".join(p.describe(self.single_right) for p in cell.precedents)
            label = "precedents" if len(cell.precedents) > 1 else "precedent"
            return f"explicit {label} {names}"
        if isinstance(cell, ImplicitCell):
            prov = cell.provenance
            parts = [
                f"{self._effect_word(cell.decision)}; dominant "
                f"{prov.source.describe(self.single_right)} via {','.join(prov.families)}"
            ]
            for d in prov.defeated:
                clause = f"defeated {d.source.describe(self.single_right)} via {','.join(d.families)}"
                if d.via == "source-type":
                    clause += " (explicit beats derived)"
                elif d.via == "key-tie":
                    clause += " (equal key, same decision)"
                parts.append(clause)
            return "; ".join(parts)
        if cell.reason == AMBIGUOUS:
            head = ",".join(cell.candidates[0].families) if cell.candidates else "?"
            names = ", ".join(c.source.describe(self.single_right) for c in cell.candidates)
            return f"ambiguous: {len(cell.candidates)} candidates tie on {head}: {names}"
        return "undefined: no influencing precedent; enforcement defaults to deny"

    def text(self) -> str:
        lines = [f"cell ({self.subject_id}, {self.object_id}) [{self.mode}]", self.summary()]
        return "\n".join(lines)


def explain_cell(matrix: AccessMatrix, subject_id: str, object_id: str) -> Explanation:
    cell = matrix.cell(subject_id, object_id)
    return Explanation(
        subject_id=subject_id,
        object_id=object_id,
        mode=matrix.mode,
        cell=cell,
        single_right=matrix.single_right,
    )
