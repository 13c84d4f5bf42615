"""Global priority events: first blood, first tower, and epic monsters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .telemetry import MatchLog, Team


class EventKind:
    FIRST_BLOOD = "first_blood"
    FIRST_TOWER = "first_tower"
    RIFT_HERALD = "rift_herald"
    DRAKE_INFERNAL = "drake_infernal"
    DRAKE_OCEAN = "drake_ocean"
    DRAKE_MOUNTAIN = "drake_mountain"
    DRAKE_CLOUD = "drake_cloud"
    DRAKE_HEXTECH = "drake_hextech"
    DRAKE_CHEMTECH = "drake_chemtech"
    ELDER_DRAGON = "elder_dragon"
    BARON = "baron"


EPIC_MONSTERS = {
    EventKind.RIFT_HERALD,
    EventKind.DRAKE_INFERNAL,
    EventKind.DRAKE_OCEAN,
    EventKind.DRAKE_MOUNTAIN,
    EventKind.DRAKE_CLOUD,
    EventKind.DRAKE_HEXTECH,
    EventKind.DRAKE_CHEMTECH,
    EventKind.ELDER_DRAGON,
    EventKind.BARON,
}


@dataclass(frozen=True)
class PriorityEvent:
    kind: str
    t: float
    credited_team: Team
    detail: Optional[str] = None  # e.g. the destroyed tower's owner

    @property
    def event_id(self) -> str:
        return f"{self.kind}@{self.t:g}"

    def to_json(self) -> dict:
        return {
            "id": self.event_id,
            "kind": self.kind,
            "t": self.t,
            "credited_team": self.credited_team.value,
            "detail": self.detail,
        }


def extract_priority_events(log: MatchLog) -> list[PriorityEvent]:
    """Scan raw frame events for the timeline anchors. First blood is the
    earliest champion kill; first tower is the earliest turret destruction,
    credited to the destroying team. Every epic-monster raw event maps to its
    typed priority event. Kills after first blood and later tower falls are
    not timeline events (they ride in the economic curve instead)."""
    out: list[PriorityEvent] = []
    seen_blood = False
    seen_tower = False
    for frame in log.frames:
        for mark in frame.raw_events:
            if mark.kind == "kill" and not seen_blood:
                out.append(PriorityEvent(EventKind.FIRST_BLOOD, frame.t, mark.team))
                seen_blood = True
            elif mark.kind == "turret" and not seen_tower:
                owner = mark.owner.value if mark.owner else None
                out.append(
                    PriorityEvent(EventKind.FIRST_TOWER, frame.t, mark.team, detail=owner)
                )
                seen_tower = True
            elif mark.kind == "monster":
                if mark.monster not in EPIC_MONSTERS:
                    raise ValueError(f"unknown epic monster {mark.monster!r}")
                out.append(PriorityEvent(mark.monster, frame.t, mark.team))
    out.sort(key=lambda e: e.t)
    return out
