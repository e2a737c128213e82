"""The administrator's precedent log: admission, collisions, audit.

Two precedents collide when they target the same matrix cell (same
subject class, same object class) and their rights sets overlap, no
matter the polarity. The log keeps its admitted entries collision-free
by applying one of three strategies when a candidate collides:

* ``overwrite-old``: every overlapping entry is dropped, the candidate
  is admitted.
* ``reject-new``: the candidate is refused, the log is unchanged.
* ``interactive``: the candidate is parked as a pending collision until
  the administrator picks the survivor; pending candidates never feed
  interpolation.

All mutations are serialized by the caller (single writer); readers get
immutable snapshots via :meth:`PrecedentLog.admitted`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone

from .model import Decision, PolicyUniverse

OVERWRITE_OLD = "overwrite-old"
REJECT_NEW = "reject-new"
INTERACTIVE = "interactive"
STRATEGIES = (OVERWRITE_OLD, REJECT_NEW, INTERACTIVE)

KEEP_OLD = "keep-old"
KEEP_NEW = "keep-new"

ADMITTED = "admitted"
REJECTED = "rejected"
PENDING = "pending"


class UnknownEntityError(ValueError):
    """A precedent references an entity that is not declared."""


class InvalidPrecedentError(ValueError):
    """A precedent carries rights outside the universe, or none at all."""


class CollisionStateError(ValueError):
    """A collision id is unknown or was already resolved."""


@dataclass(frozen=True)
class Precedent:
    """An explicit access rule written by the administrator.

    ``seq`` is the admission number, kept for audit only; ``note`` is a
    free-form label. Neither takes part in equality, so two logs holding
    the same rules are equal regardless of when entries were admitted.
    """

    subject_id: str
    object_id: str
    decision: Decision
    seq: int = field(default=0, compare=False)
    note: str | None = field(default=None, compare=False)

    def describe(self, single_right: bool = False) -> str:
        if self.note:
            return self.note
        if single_right:
            bit = "1" if self.decision.effect == "allow" else "0"
            return f"({self.subject_id},{self.object_id},{bit})"
        sign = "+" if self.decision.effect == "allow" else "-"
        rights = ",".join(sorted(self.decision.rights))
        return f"({self.subject_id},{self.object_id},{sign}{rights})"


@dataclass
class CollisionRecord:
    """One unresolved (or resolved) clash between an old entry and a candidate."""

    collision_id: int
    old: Precedent
    new: Precedent
    detected_at: int
    resolution: str = "unresolved"  # unresolved | kept-old | kept-new


@dataclass(frozen=True)
class AuditEvent:
    seq: int
    at: str
    event: str  # admitted | rejected | overwritten | pending | resolved
    precedent: Precedent
    detail: str = ""


@dataclass(frozen=True)
class Outcome:
    """Result of submitting or resolving a precedent."""

    status: str  # admitted | rejected | pending
    precedent: Precedent
    conflict: Precedent | None = None
    collision_id: int | None = None


def conflicts_with(universe: PolicyUniverse, a: Precedent, b: Precedent) -> bool:
    """True when two precedents target the same cell with overlapping rights."""
    return (
        universe.rep_id(a.subject_id) == universe.rep_id(b.subject_id)
        and universe.rep_id(a.object_id) == universe.rep_id(b.object_id)
        and bool(a.decision.rights & b.decision.rights)
    )


class PrecedentLog:
    """Admission-ordered precedent store bound to one policy universe."""

    def __init__(self, universe: PolicyUniverse, strategy: str = REJECT_NEW) -> None:
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown collision strategy: {strategy!r}")
        self.universe = universe
        self.strategy = strategy
        self._entries: list[Precedent] = []
        self._collisions: list[CollisionRecord] = []
        self._events: list[AuditEvent] = []
        self._next_seq = 1
        self._next_collision = 1

    # -- snapshots ---------------------------------------------------

    def admitted(self) -> tuple[Precedent, ...]:
        return tuple(self._entries)

    def pending(self) -> tuple[CollisionRecord, ...]:
        return tuple(c for c in self._collisions if c.resolution == "unresolved")

    def collisions(self) -> tuple[CollisionRecord, ...]:
        return tuple(self._collisions)

    def events(self) -> tuple[AuditEvent, ...]:
        return tuple(self._events)

    # -- operations --------------------------------------------------

    def validate_candidate(self, candidate: Precedent) -> None:
        """Reject candidates naming unknown entities or foreign rights."""
        for entity_id, kind in (
            (candidate.subject_id, "subject"),
            (candidate.object_id, "object"),
        ):
            try:
                profile = self.universe.profile(entity_id)
            except KeyError:
                raise UnknownEntityError(f"unknown {kind}: {entity_id!r}") from None
            if profile.kind != kind:
                raise UnknownEntityError(
                    f"{entity_id!r} is a {profile.kind}, not a {kind}"
                )
        extra = candidate.decision.rights - set(self.universe.rights)
        if extra:
            raise InvalidPrecedentError(
                f"rights {sorted(extra)} are not in the declared rights universe"
            )

    def detect_conflict(self, candidate: Precedent) -> Precedent | None:
        """Earliest admitted entry colliding with the candidate, if any."""
        for entry in self._entries:
            if conflicts_with(self.universe, entry, candidate):
                return entry
        return None

    def apply(
        self,
        subject_id: str,
        object_id: str,
        decision: Decision,
        note: str | None = None,
    ) -> Outcome:
        """Submit a candidate under the configured collision strategy."""
        candidate = Precedent(subject_id, object_id, decision, seq=self._next_seq, note=note)
        self.validate_candidate(candidate)
        return self._admit(candidate)

    def _admit(self, candidate: Precedent) -> Outcome:
        conflict = self.detect_conflict(candidate)
        if conflict is None:
            self._append(candidate)
            return Outcome(ADMITTED, candidate)

        if self.strategy == REJECT_NEW:
            self._record(REJECTED, candidate, f"collides with {conflict.describe()}")
            return Outcome(REJECTED, candidate, conflict=conflict)

        if self.strategy == OVERWRITE_OLD:
            # A candidate may overlap several disjoint-rights entries at
            # the same cell; all of them must go to keep the log clean.
            for old in [e for e in self._entries if conflicts_with(self.universe, e, candidate)]:
                self._entries.remove(old)
                self._record("overwritten", old, f"replaced by {candidate.describe()}")
            self._append(candidate)
            return Outcome(ADMITTED, candidate, conflict=conflict)

        record = CollisionRecord(
            collision_id=self._next_collision,
            old=conflict,
            new=candidate,
            detected_at=candidate.seq,
        )
        self._next_collision += 1
        self._collisions.append(record)
        self._record(PENDING, candidate, f"collides with {conflict.describe()}")
        return Outcome(PENDING, candidate, conflict=conflict, collision_id=record.collision_id)

    def resolve(self, collision_id: int, choice: str) -> Outcome:
        """Answer a pending collision with ``keep-old`` or ``keep-new``."""
        if choice not in (KEEP_OLD, KEEP_NEW):
            raise ValueError(f"choice must be {KEEP_OLD!r} or {KEEP_NEW!r}")
        record = next((c for c in self._collisions if c.collision_id == collision_id), None)
        if record is None:
            raise CollisionStateError(f"unknown collision id: {collision_id}")
        if record.resolution != "unresolved":
            raise CollisionStateError(f"collision {collision_id} already resolved")

        if choice == KEEP_OLD:
            record.resolution = "kept-old"
            self._record("resolved", record.new, f"kept old {record.old.describe()}")
            return Outcome(REJECTED, record.new, conflict=record.old)

        record.resolution = "kept-new"
        if record.old in self._entries:
            self._entries.remove(record.old)
            self._record("overwritten", record.old, f"replaced by {record.new.describe()}")
        self._record("resolved", record.new, f"dropped old {record.old.describe()}")
        # The candidate may still overlap another admitted entry; rerun
        # admission so a chained collision is surfaced, never silently
        # admitted.
        return self._admit(record.new)

    # -- internals ---------------------------------------------------

    def _append(self, candidate: Precedent) -> None:
        self._entries.append(candidate)
        self._next_seq = max(self._next_seq, candidate.seq) + 1
        self._record(ADMITTED, candidate)

    def _record(self, event: str, precedent: Precedent, detail: str = "") -> None:
        self._events.append(
            AuditEvent(
                seq=len(self._events) + 1,
                at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
                event=event,
                precedent=precedent,
                detail=detail,
            )
        )
