"""Domain model for frame-level match telemetry.

A match log is line-delimited JSON: one header line followed by one line per
frame. See docs/log_format.md for the field-level contract. All types here are
immutable after parsing and safe to share across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Iterable, Optional

import numpy as np


class TelemetryError(Exception):
    """Base class for log parsing/validation failures."""


class SchemaError(TelemetryError):
    """Unknown schema version or missing/invalid field."""


class OrderError(TelemetryError):
    """Frame timestamps are not strictly increasing."""


class RosterError(TelemetryError):
    """A frame does not carry exactly the expected 10-champion roster."""


class BehaviorClass(IntEnum):
    """What a champion is doing in one frame. Index order is canonical and is
    the layout of every one-hot and probability vector in the system."""

    MINION = 0
    CHAMPION = 1
    RESOURCE = 2
    TURRET = 3
    INACTION = 4


class Role(str, Enum):
    TOP = "Top"
    JUNGLER = "Jungler"
    MID = "Mid"
    BOT = "Bot"
    SUPPORT = "Support"


class Team(str, Enum):
    BLUE = "Blue"
    RED = "Red"


ROLE_ORDER: tuple[Role, ...] = (Role.TOP, Role.JUNGLER, Role.MID, Role.BOT, Role.SUPPORT)

# Champion slots 0-4 are Blue Top..Support, slots 5-9 are Red Top..Support.
SLOT_COUNT = 10

FEATURES_PER_CHAMPION = 9
TARGETS_PER_CHAMPION = 7


def slot_of(team: Team, role: Role) -> int:
    base = 0 if team is Team.BLUE else 5
    return base + ROLE_ORDER.index(role)


def team_of_slot(slot: int) -> Team:
    return Team.BLUE if slot < 5 else Team.RED


def role_of_slot(slot: int) -> Role:
    return ROLE_ORDER[slot % 5]


@dataclass(frozen=True)
class EventMark:
    """A raw event attached to a frame.

    kind is one of "kill", "turret", "monster". ``team`` is the acting/credited
    team. For "turret" events ``owner`` is the team whose turret was destroyed;
    for "monster" events ``monster`` names the epic monster.
    """

    kind: str
    team: Team
    monster: Optional[str] = None
    owner: Optional[Team] = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "team": self.team.value}
        if self.monster is not None:
            out["monster"] = self.monster
        if self.owner is not None:
            out["owner"] = self.owner.value
        return out

    @staticmethod
    def from_json(obj: dict) -> "EventMark":
        try:
            return EventMark(
                kind=obj["kind"],
                team=Team(obj["team"]),
                monster=obj.get("monster"),
                owner=Team(obj["owner"]) if obj.get("owner") else None,
            )
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"bad event mark: {obj!r}") from exc


@dataclass(frozen=True)
class ChampionState:
    champion_id: str
    role: Role
    team: Team
    hp_norm: float
    mana_norm: float
    gold: int
    level: int
    global_pos: tuple[float, float]
    local_pos: Optional[tuple[float, float]]
    behavior: BehaviorClass

    def to_json(self) -> dict:
        out: dict = {
            "champion_id": self.champion_id,
            "role": self.role.value,
            "team": self.team.value,
            "hp_norm": self.hp_norm,
            "mana_norm": self.mana_norm,
            "gold": self.gold,
            "level": self.level,
            "global_pos": list(self.global_pos),
            "behavior": self.behavior.name.capitalize(),
        }
        if self.local_pos is not None:
            out["local_pos"] = list(self.local_pos)
        return out

    @staticmethod
    def from_json(obj: dict) -> "ChampionState":
        try:
            local = obj.get("local_pos")
            return ChampionState(
                champion_id=str(obj["champion_id"]),
                role=Role(obj["role"]),
                team=Team(obj["team"]),
                hp_norm=float(obj["hp_norm"]),
                mana_norm=float(obj["mana_norm"]),
                gold=int(obj["gold"]),
                level=int(obj["level"]),
                global_pos=(float(obj["global_pos"][0]), float(obj["global_pos"][1])),
                local_pos=(float(local[0]), float(local[1])) if local is not None else None,
                behavior=BehaviorClass[str(obj["behavior"]).upper()],
            )
        except (KeyError, ValueError, IndexError, TypeError) as exc:
            raise SchemaError(f"bad champion state: {exc}") from exc


@dataclass(frozen=True)
class FrameRecord:
    t: float
    champions: tuple[ChampionState, ...]
    raw_events: tuple[EventMark, ...] = ()

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "champions": [c.to_json() for c in self.champions],
            "events": [e.to_json() for e in self.raw_events],
        }

    @staticmethod
    def from_json(obj: dict) -> "FrameRecord":
        try:
            champs = tuple(ChampionState.from_json(c) for c in obj["champions"])
            events = tuple(EventMark.from_json(e) for e in obj.get("events", []))
            return FrameRecord(t=float(obj["t"]), champions=champs, raw_events=events)
        except KeyError as exc:
            raise SchemaError(f"frame missing field {exc}") from exc


@dataclass(frozen=True)
class PlayerSeat:
    name: str
    role: Role
    team: Team
    champion: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "role": self.role.value,
            "team": self.team.value,
            "champion": self.champion,
        }

    @staticmethod
    def from_json(obj: dict) -> "PlayerSeat":
        try:
            return PlayerSeat(
                name=str(obj["name"]),
                role=Role(obj["role"]),
                team=Team(obj["team"]),
                champion=str(obj["champion"]),
            )
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"bad player seat: {exc}") from exc


SCHEMA_VERSION = 1


@dataclass(frozen=True)
class MatchLog:
    match_id: str
    event_name: str
    teams: dict  # side value -> team name, e.g. {"Blue": "GEN", "Red": "BLG"}
    players: tuple[PlayerSeat, ...]
    frames: tuple[FrameRecord, ...]
    winner: str
    schema_version: int = SCHEMA_VERSION
    summary: dict = field(default_factory=dict)

    def team_name(self, side: Team) -> str:
        return self.teams[side.value]

    def side_of(self, team_name: str) -> Team:
        for side, name in self.teams.items():
            if name == team_name:
                return Team(side)
        raise KeyError(team_name)

    def seat(self, slot: int) -> PlayerSeat:
        team, role = team_of_slot(slot), role_of_slot(slot)
        for p in self.players:
            if p.team is team and p.role is role:
                return p
        raise RosterError(f"no player for slot {slot}")

    @property
    def duration_s(self) -> float:
        return self.frames[-1].t - self.frames[0].t if self.frames else 0.0


def _header_json(log: MatchLog) -> dict:
    return {
        "match_id": log.match_id,
        "schema_version": log.schema_version,
        "event_name": log.event_name,
        "teams": log.teams,
        "players": [p.to_json() for p in log.players],
        "winner": log.winner,
        "summary": log.summary,
    }


def serialize_match_log(log: MatchLog) -> bytes:
    """Canonical line-delimited serialization: header line then one frame per
    line. Keys are sorted so equal logs serialize byte-identically."""
    lines = [json.dumps(_header_json(log), sort_keys=True, separators=(",", ":"))]
    for frame in log.frames:
        lines.append(json.dumps(frame.to_json(), sort_keys=True, separators=(",", ":")))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_match_log(data: bytes) -> MatchLog:
    """Parse and structurally validate a line-delimited match log."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise SchemaError("log is not valid UTF-8") from exc
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise SchemaError("empty log")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise SchemaError(f"bad header: {exc}") from exc
    if not isinstance(header, dict):
        raise SchemaError("header is not an object")
    version = header.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema_version {version!r}")
    for key in ("match_id", "event_name", "teams", "players", "winner"):
        if key not in header:
            raise SchemaError(f"header missing {key!r}")
    players = tuple(PlayerSeat.from_json(p) for p in header["players"])
    if len(players) != SLOT_COUNT:
        raise RosterError(f"roster has {len(players)} players, expected {SLOT_COUNT}")
    seats = {(p.team, p.role) for p in players}
    if len(seats) != SLOT_COUNT:
        raise RosterError("roster does not cover all 10 team/role slots")
    teams = dict(header["teams"])
    if set(teams.keys()) != {Team.BLUE.value, Team.RED.value}:
        raise SchemaError(f"teams must map both sides, got {sorted(teams)}")
    winner = str(header["winner"])
    if winner not in teams.values():
        raise SchemaError(f"winner {winner!r} is not one of the teams")

    frames = []
    prev_t = None
    for i, line in enumerate(lines[1:]):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bad frame line {i}: {exc}") from exc
        frame = FrameRecord.from_json(obj)
        if len(frame.champions) != SLOT_COUNT:
            raise RosterError(
                f"frame {i} has {len(frame.champions)} champions, expected {SLOT_COUNT}"
            )
        for slot, champ in enumerate(frame.champions):
            if champ.team is not team_of_slot(slot) or champ.role is not role_of_slot(slot):
                raise RosterError(f"frame {i} slot {slot} out of canonical order")
        if prev_t is not None and frame.t <= prev_t:
            raise OrderError(f"frame {i} timestamp {frame.t} not after {prev_t}")
        prev_t = frame.t
        frames.append(frame)
    if not frames:
        raise SchemaError("log has no frames")

    return MatchLog(
        match_id=str(header["match_id"]),
        event_name=str(header["event_name"]),
        teams=teams,
        players=players,
        frames=tuple(frames),
        winner=winner,
        schema_version=version,
        summary=dict(header.get("summary", {})),
    )


@dataclass(frozen=True)
class Finding:
    kind: str  # GoldDecrease | RangeViolation | DuplicateRole
    frame_index: int
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return not self.findings


def validate_match_log(log: MatchLog) -> ValidationReport:
    """Report-only check of the numeric invariants a parsed log must satisfy.

    Structural problems (roster, ordering) are already rejected by the parser;
    this covers value-level violations with their frame indices.
    """
    findings: list[Finding] = []
    prev_gold: dict[int, int] = {}
    for i, frame in enumerate(log.frames):
        for slot, champ in enumerate(frame.champions):
            for name, value in (
                ("hp_norm", champ.hp_norm),
                ("mana_norm", champ.mana_norm),
                ("x", champ.global_pos[0]),
                ("y", champ.global_pos[1]),
            ):
                if not (0.0 <= value <= 1.0):
                    findings.append(
                        Finding("RangeViolation", i, f"slot {slot} {name}={value}")
                    )
            if champ.gold < 0:
                findings.append(Finding("RangeViolation", i, f"slot {slot} gold={champ.gold}"))
            if slot in prev_gold and champ.gold < prev_gold[slot]:
                findings.append(
                    Finding(
                        "GoldDecrease",
                        i,
                        f"slot {slot} gold {prev_gold[slot]} -> {champ.gold}",
                    )
                )
            prev_gold[slot] = champ.gold
        roles_seen = [(c.team, c.role) for c in frame.champions]
        if len(set(roles_seen)) != len(roles_seen):
            findings.append(Finding("DuplicateRole", i, "duplicate team/role pair"))
    return ValidationReport(tuple(findings))


@dataclass(frozen=True)
class NormalizationStats:
    """Corpus-wide gold min/max, stored with trained models so the same scaling
    applies at inference time."""

    gold_min: int
    gold_max: int

    @property
    def degenerate(self) -> bool:
        return self.gold_max == self.gold_min

    def to_json(self) -> dict:
        return {"gold_min": self.gold_min, "gold_max": self.gold_max}

    @staticmethod
    def from_json(obj: dict) -> "NormalizationStats":
        return NormalizationStats(int(obj["gold_min"]), int(obj["gold_max"]))


def compute_normalization(logs: Iterable[MatchLog]) -> NormalizationStats:
    lo, hi = None, None
    for log in logs:
        for frame in log.frames:
            for champ in frame.champions:
                g = champ.gold
                lo = g if lo is None or g < lo else lo
                hi = g if hi is None or g > hi else hi
    if lo is None:
        raise ValueError("no frames in corpus")
    return NormalizationStats(lo, hi)


def encode_champion_frame(state: ChampionState, gold_stats: NormalizationStats) -> np.ndarray:
    """9-feature vector: [hp, gold_norm, x, y, one-hot behavior x5].

    Gold is min-max scaled with the corpus stats and clamped to [0,1]; a
    degenerate corpus (max == min) encodes gold as 0.
    """
    if gold_stats.degenerate:
        gold_norm = 0.0
    else:
        span = gold_stats.gold_max - gold_stats.gold_min
        gold_norm = min(1.0, max(0.0, (state.gold - gold_stats.gold_min) / span))
    vec = np.zeros(FEATURES_PER_CHAMPION, dtype=np.float64)
    vec[0] = state.hp_norm
    vec[1] = gold_norm
    vec[2] = state.global_pos[0]
    vec[3] = state.global_pos[1]
    vec[4 + int(state.behavior)] = 1.0
    return vec


@dataclass(frozen=True)
class StrategyTriad:
    champion_id: str
    coords: tuple[float, float]
    behavior: BehaviorClass


def observed_triads(frame: FrameRecord) -> tuple[StrategyTriad, ...]:
    return tuple(
        StrategyTriad(c.champion_id, c.global_pos, c.behavior) for c in frame.champions
    )


def gold_diff_series(log: MatchLog, perspective: Team) -> list[tuple[float, int]]:
    """Per frame: perspective team's total gold minus the other team's."""
    sign = 1 if perspective is Team.BLUE else -1
    out = []
    for frame in log.frames:
        blue = sum(c.gold for c in frame.champions[:5])
        red = sum(c.gold for c in frame.champions[5:])
        out.append((frame.t, sign * (blue - red)))
    return out


def lane_gold_diffs(log: MatchLog, perspective: Team) -> dict[Role, list[tuple[float, int]]]:
    """Per role: perspective champion's gold minus the lane opponent's."""
    sign = 1 if perspective is Team.BLUE else -1
    out: dict[Role, list[tuple[float, int]]] = {role: [] for role in ROLE_ORDER}
    for frame in log.frames:
        for i, role in enumerate(ROLE_ORDER):
            diff = frame.champions[i].gold - frame.champions[i + 5].gold
            out[role].append((frame.t, sign * diff))
    return out


def series_value_at(series: list[tuple[float, int]], t: float) -> int:
    """Value of a (t, value) series at the last point at or before t."""
    value = None
    for ts, v in series:
        if ts <= t:
            value = v
        else:
            break
    if value is None:
        raise ValueError(f"series does not cover t={t}")
    return value
