"""Deterministic synthetic match generation with deviation injection.

Generated matches follow scripted team dynamics: per-role waypoint movement
with small seeded jitter, a behavior transition table conditioned on (role,
game phase, prior behavior), per-behavior gold income, and a scripted list of
priority events. The generator doubles as the ground-truth oracle for detector
tests: the exact policy is returned alongside the log.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .telemetry import (
    ROLE_ORDER,
    SLOT_COUNT,
    BehaviorClass,
    ChampionState,
    EventMark,
    FrameRecord,
    MatchLog,
    PlayerSeat,
    Role,
    Team,
    role_of_slot,
    slot_of,
    team_of_slot,
)


class ConfigError(Exception):
    """Generator config is invalid (e.g. non-stochastic transition row)."""


class SpanError(Exception):
    """A deviation span falls outside the match."""


PHASES = ("early", "mid", "late")


def phase_of(frame_index: int, n_frames: int) -> str:
    third = max(1, n_frames // 3)
    return PHASES[min(2, frame_index // third)]


@dataclass(frozen=True)
class TransitionTable:
    """P(next behavior | role, phase, prior behavior) as rows of 5 probs."""

    rows: dict[tuple[Role, str, BehaviorClass], tuple[float, ...]]

    def row(self, role: Role, phase: str, prior: BehaviorClass) -> tuple[float, ...]:
        return self.rows[(role, phase, prior)]

    def validate(self) -> None:
        for key, probs in self.rows.items():
            if len(probs) != 5 or any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
                raise ConfigError(f"transition row {key} does not sum to 1: {probs}")

    def predicted_probs(self, role: Role, phase: str, prior: BehaviorClass) -> np.ndarray:
        return np.asarray(self.row(role, phase, prior), dtype=np.float64)


def _one_hot_row(b: BehaviorClass) -> tuple[float, ...]:
    row = [0.0] * 5
    row[int(b)] = 1.0
    return tuple(row)


def deterministic_policy(schedule: dict[tuple[Role, str], BehaviorClass]) -> TransitionTable:
    """All transition mass on one behavior per (role, phase), independent of
    the prior behavior. Used for oracle-exact detector tests."""
    rows = {}
    for role in ROLE_ORDER:
        for phase in PHASES:
            target = schedule[(role, phase)]
            for prior in BehaviorClass:
                rows[(role, phase, prior)] = _one_hot_row(target)
    return TransitionTable(rows)


# Role-specific behavior cycles; the dominant next behavior follows the cycle
# so a persistence baseline (predict the prior behavior) is poor.
_ROLE_CYCLES: dict[Role, tuple[BehaviorClass, ...]] = {
    Role.TOP: (BehaviorClass.MINION, BehaviorClass.CHAMPION, BehaviorClass.INACTION),
    Role.JUNGLER: (BehaviorClass.RESOURCE, BehaviorClass.CHAMPION, BehaviorClass.INACTION),
    Role.MID: (BehaviorClass.MINION, BehaviorClass.INACTION, BehaviorClass.CHAMPION),
    Role.BOT: (BehaviorClass.MINION, BehaviorClass.CHAMPION, BehaviorClass.MINION),
    Role.SUPPORT: (BehaviorClass.INACTION, BehaviorClass.CHAMPION, BehaviorClass.MINION),
}


def structured_policy(dominant: float = 0.95) -> TransitionTable:
    """Stochastic but highly structured: the next behavior advances a
    role-specific cycle with probability ``dominant``; leftover mass spreads
    over the remaining behaviors."""
    if not (0.0 < dominant <= 1.0):
        raise ConfigError("dominant probability must be in (0, 1]")
    rows = {}
    rest = (1.0 - dominant) / 4.0
    for role in ROLE_ORDER:
        cycle = _ROLE_CYCLES[role]
        for phase_i, phase in enumerate(PHASES):
            for prior in BehaviorClass:
                if prior in cycle:
                    nxt = cycle[(cycle.index(prior) + 1) % len(cycle)]
                else:
                    nxt = cycle[phase_i % len(cycle)]
                row = [rest] * 5
                row[int(nxt)] = dominant
                rows[(role, phase, prior)] = tuple(row)
    return TransitionTable(rows)


@dataclass(frozen=True)
class ScriptedEvent:
    kind: str  # "kill" | "turret" | "monster"
    frame: int
    team: Team
    monster: Optional[str] = None
    owner: Optional[Team] = None
    slot: Optional[int] = None  # credited champion slot for kill bounty


DEFAULT_BOUNTIES = {"kill": 300, "turret": 250, "monster": 150}

# Per-role, per-behavior gold income per frame (generator convention, not
# game-accurate).
DEFAULT_GOLD_RATES: dict[Role, dict[BehaviorClass, int]] = {
    Role.TOP: {b: r for b, r in zip(BehaviorClass, (5, 3, 2, 3, 1))},
    Role.JUNGLER: {b: r for b, r in zip(BehaviorClass, (2, 3, 6, 2, 1))},
    Role.MID: {b: r for b, r in zip(BehaviorClass, (6, 4, 2, 3, 1))},
    Role.BOT: {b: r for b, r in zip(BehaviorClass, (7, 4, 2, 3, 1))},
    Role.SUPPORT: {b: r for b, r in zip(BehaviorClass, (1, 2, 1, 1, 1))},
}

# Normalized minimap anchor points per role; Red mirrors Blue.
_LANE_ANCHORS: dict[Role, list[tuple[float, float]]] = {
    Role.TOP: [(0.12, 0.80), (0.15, 0.55), (0.30, 0.75), (0.45, 0.55)],
    Role.JUNGLER: [(0.30, 0.40), (0.45, 0.60), (0.55, 0.45), (0.40, 0.30)],
    Role.MID: [(0.40, 0.45), (0.50, 0.50), (0.45, 0.60), (0.55, 0.40)],
    Role.BOT: [(0.75, 0.15), (0.55, 0.20), (0.70, 0.35), (0.50, 0.45)],
    Role.SUPPORT: [(0.72, 0.18), (0.55, 0.25), (0.65, 0.40), (0.50, 0.50)],
}


def default_waypoints(n_frames: int) -> dict[int, list[tuple[int, float, float]]]:
    """Waypoint schedule per slot: (frame, x, y) anchors spread over the match.
    Red-side paths mirror Blue across the map diagonal."""
    schedule: dict[int, list[tuple[int, float, float]]] = {}
    for slot in range(SLOT_COUNT):
        role = role_of_slot(slot)
        anchors = _LANE_ANCHORS[role]
        points = []
        for i, (x, y) in enumerate(anchors):
            frame = int(round(i * (n_frames - 1) / (len(anchors) - 1)))
            if team_of_slot(slot) is Team.RED:
                x, y = 1.0 - x, 1.0 - y
            points.append((frame, x, y))
        schedule[slot] = points
    return schedule


def default_event_script(n_frames: int) -> list[ScriptedEvent]:
    """A plausible sequence of priority events scaled to the match length."""
    f = lambda frac: max(1, min(n_frames - 1, int(n_frames * frac)))
    return [
        ScriptedEvent("kill", f(0.14), Team.BLUE, slot=slot_of(Team.BLUE, Role.MID)),
        ScriptedEvent("monster", f(0.27), Team.RED, monster="drake_hextech"),
        ScriptedEvent("turret", f(0.36), Team.RED, owner=Team.BLUE),
        ScriptedEvent("kill", f(0.45), Team.RED, slot=slot_of(Team.RED, Role.BOT)),
        ScriptedEvent("monster", f(0.55), Team.BLUE, monster="rift_herald"),
        ScriptedEvent("monster", f(0.68), Team.BLUE, monster="drake_ocean"),
        ScriptedEvent("monster", f(0.82), Team.RED, monster="baron"),
        ScriptedEvent("monster", f(0.93), Team.RED, monster="elder_dragon"),
    ]


@dataclass(frozen=True)
class GenConfig:
    seed: int
    n_frames: int = 2200
    behavior_policy: Optional[TransitionTable] = None
    gold_rates: dict = field(default_factory=lambda: DEFAULT_GOLD_RATES)
    movement_policy: Optional[dict] = None
    event_script: Optional[list] = None
    bounties: dict = field(default_factory=lambda: dict(DEFAULT_BOUNTIES))
    jitter_sigma: float = 0.01
    match_id: str = ""
    event_name: str = "Synthetic Cup"
    team_names: tuple[str, str] = ("Azure", "Crimson")
    winner: Optional[str] = None
    t0: float = 0.0
    dt: float = 1.0


@dataclass(frozen=True)
class GroundTruth:
    """The exact generating process, sufficient to build an oracle predictor."""

    policy: TransitionTable
    waypoints: dict[int, list[tuple[int, float, float]]]
    n_frames: int
    behaviors: tuple[tuple[BehaviorClass, ...], ...]  # [frame][slot]
    clean_positions: tuple[tuple[tuple[float, float], ...], ...]  # pre-jitter


def _waypoint_pos(points: list[tuple[int, float, float]], frame: int) -> tuple[float, float]:
    if frame <= points[0][0]:
        return points[0][1], points[0][2]
    for (f0, x0, y0), (f1, x1, y1) in zip(points, points[1:]):
        if frame <= f1:
            a = (frame - f0) / (f1 - f0)
            return x0 + a * (x1 - x0), y0 + a * (y1 - y0)
    return points[-1][1], points[-1][2]


def _champion_names(seed: int) -> list[str]:
    return [f"champ_{seed % 97:02d}_{i}" for i in range(SLOT_COUNT)]


def _roster(config: GenConfig) -> tuple[PlayerSeat, ...]:
    champs = _champion_names(config.seed)
    seats = []
    for slot in range(SLOT_COUNT):
        team = team_of_slot(slot)
        role = role_of_slot(slot)
        team_name = config.team_names[0] if team is Team.BLUE else config.team_names[1]
        seats.append(
            PlayerSeat(
                name=f"{team_name}_{role.value}",
                role=role,
                team=team,
                champion=champs[slot],
            )
        )
    return tuple(seats)


def _synthetic_summary(config: GenConfig, roster: Sequence[PlayerSeat], rng: np.random.Generator,
                       final_gold: dict[int, int], duration_s: float) -> dict:
    """Per-player post-match stats block consumed by the profiles module."""
    players = {}
    item_pool = [f"item_{i}" for i in range(8)]
    rune_pool = [f"rune_{i}" for i in range(6)]
    skill_pool = ["Q", "W", "E", "R"]
    teamfights = int(rng.integers(6, 12))
    for slot, seat in enumerate(roster):
        damage = float(rng.uniform(8_000, 30_000))
        players[seat.name] = {
            "damage": round(damage, 1),
            "damage_taken": round(float(rng.uniform(8_000, 35_000)), 1),
            "damage_to_champions": round(damage * float(rng.uniform(0.4, 0.9)), 1),
            "teamfights_participated": int(rng.integers(2, teamfights + 1)),
            "teamfights_total": teamfights,
            "kills": int(rng.integers(0, 8)),
            "deaths": int(rng.integers(0, 6)),
            "assists": int(rng.integers(0, 12)),
            "creep_score": int(final_gold[slot] / 12),
            "items": sorted(rng.choice(item_pool, size=3, replace=False).tolist()),
            "skills": [skill_pool[int(rng.integers(0, 3))], "R"],
            "runes": sorted(rng.choice(rune_pool, size=2, replace=False).tolist()),
        }
    return {"duration_s": duration_s, "players": players}


def generate_match(config: GenConfig) -> tuple[MatchLog, GroundTruth]:
    """Pure function of the config: the same seed yields a byte-identical log."""
    if config.n_frames < 6:
        raise ConfigError("n_frames must be at least 6 (one prediction window)")
    policy = config.behavior_policy or structured_policy()
    policy.validate()
    waypoints = config.movement_policy or default_waypoints(config.n_frames)
    script = config.event_script if config.event_script is not None else default_event_script(config.n_frames)
    rng = np.random.default_rng(config.seed)
    roster = _roster(config)

    events_by_frame: dict[int, list[ScriptedEvent]] = {}
    for ev in script:
        if not (0 <= ev.frame < config.n_frames):
            raise ConfigError(f"scripted event frame {ev.frame} outside match")
        events_by_frame.setdefault(ev.frame, []).append(ev)

    gold = {slot: 500 for slot in range(SLOT_COUNT)}
    behaviors: list[tuple[BehaviorClass, ...]] = []
    clean_positions: list[tuple[tuple[float, float], ...]] = []
    frames: list[FrameRecord] = []
    prior: list[BehaviorClass] = [BehaviorClass.INACTION] * SLOT_COUNT

    for fi in range(config.n_frames):
        phase = phase_of(fi, config.n_frames)
        frame_behaviors = []
        for slot in range(SLOT_COUNT):
            probs = policy.row(role_of_slot(slot), phase, prior[slot])
            b = BehaviorClass(int(rng.choice(5, p=probs)))
            frame_behaviors.append(b)
        prior = frame_behaviors

        positions = tuple(_waypoint_pos(waypoints[slot], fi) for slot in range(SLOT_COUNT))
        jitter = rng.normal(0.0, config.jitter_sigma, size=(SLOT_COUNT, 2))

        # income before event bounties so bounty frames still rise
        for slot in range(SLOT_COUNT):
            gold[slot] += config.gold_rates[role_of_slot(slot)][frame_behaviors[slot]]
        marks = []
        for ev in events_by_frame.get(fi, ()):  # scripted bounties
            bounty = config.bounties.get(ev.kind, 0)
            if ev.kind == "kill":
                credited = ev.slot if ev.slot is not None else slot_of(ev.team, Role.MID)
                gold[credited] += bounty
                marks.append(EventMark("kill", ev.team))
            elif ev.kind == "turret":
                share = bounty // 5
                for slot in range(SLOT_COUNT):
                    if team_of_slot(slot) is ev.team:
                        gold[slot] += share
                marks.append(EventMark("turret", ev.team, owner=ev.owner or (
                    Team.RED if ev.team is Team.BLUE else Team.BLUE)))
            elif ev.kind == "monster":
                share = bounty // 5
                for slot in range(SLOT_COUNT):
                    if team_of_slot(slot) is ev.team:
                        gold[slot] += share
                marks.append(EventMark("monster", ev.team, monster=ev.monster))
            else:
                raise ConfigError(f"unknown scripted event kind {ev.kind!r}")

        champions = []
        for slot in range(SLOT_COUNT):
            x = float(np.clip(positions[slot][0] + jitter[slot, 0], 0.0, 1.0))
            y = float(np.clip(positions[slot][1] + jitter[slot, 1], 0.0, 1.0))
            hp = float(np.clip(0.55 + 0.4 * np.sin(0.013 * fi + slot), 0.05, 1.0))
            mana = float(np.clip(0.6 + 0.35 * np.cos(0.011 * fi + 2 * slot), 0.05, 1.0))
            champions.append(
                ChampionState(
                    champion_id=roster[slot].champion,
                    role=role_of_slot(slot),
                    team=team_of_slot(slot),
                    hp_norm=round(hp, 6),
                    mana_norm=round(mana, 6),
                    gold=gold[slot],
                    level=min(18, 1 + fi * 17 // max(1, config.n_frames - 1)),
                    global_pos=(round(x, 6), round(y, 6)),
                    local_pos=None,
                    behavior=frame_behaviors[slot],
                )
            )
        t = config.t0 + fi * config.dt
        frames.append(FrameRecord(t=t, champions=tuple(champions), raw_events=tuple(marks)))
        behaviors.append(tuple(frame_behaviors))
        clean_positions.append(positions)

    duration = frames[-1].t - frames[0].t
    winner = config.winner or config.team_names[0]
    match_id = config.match_id or f"syn-{config.seed:08d}"
    log = MatchLog(
        match_id=match_id,
        event_name=config.event_name,
        teams={Team.BLUE.value: config.team_names[0], Team.RED.value: config.team_names[1]},
        players=roster,
        frames=tuple(frames),
        winner=winner,
        summary=_synthetic_summary(config, roster, rng, gold, duration),
    )
    truth = GroundTruth(
        policy=policy,
        waypoints=waypoints,
        n_frames=config.n_frames,
        behaviors=tuple(behaviors),
        clean_positions=tuple(clean_positions),
    )
    return log, truth


def ground_truth_to_json(truth: GroundTruth) -> dict:
    """Sidecar representation: policy rows + waypoints are enough to rebuild
    an oracle predictor (clean positions are recomputed from the waypoints)."""
    rows = [
        {
            "role": role.value,
            "phase": phase,
            "prior": prior.name.capitalize(),
            "probs": list(probs),
        }
        for (role, phase, prior), probs in sorted(
            truth.policy.rows.items(), key=lambda kv: (kv[0][0].value, kv[0][1], int(kv[0][2]))
        )
    ]
    return {
        "format": "stratincon-truth",
        "n_frames": truth.n_frames,
        "policy": rows,
        "waypoints": {str(slot): [list(p) for p in pts] for slot, pts in truth.waypoints.items()},
    }


def ground_truth_from_json(obj: dict) -> GroundTruth:
    if obj.get("format") != "stratincon-truth":
        raise ConfigError("not a ground-truth sidecar")
    rows = {
        (
            Role(r["role"]),
            r["phase"],
            BehaviorClass[r["prior"].upper()],
        ): tuple(r["probs"])
        for r in obj["policy"]
    }
    waypoints = {
        int(slot): [(int(f), float(x), float(y)) for f, x, y in pts]
        for slot, pts in obj["waypoints"].items()
    }
    n_frames = int(obj["n_frames"])
    clean_positions = tuple(
        tuple(_waypoint_pos(waypoints[slot], fi) for slot in range(SLOT_COUNT))
        for fi in range(n_frames)
    )
    return GroundTruth(
        policy=TransitionTable(rows),
        waypoints=waypoints,
        n_frames=n_frames,
        behaviors=(),
        clean_positions=clean_positions,
    )


@dataclass(frozen=True)
class DeviationSpec:
    slot: int
    t0: int  # inclusive frame index
    t1: int  # inclusive frame index
    behavior: BehaviorClass
    displacement: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class DeviationLabel:
    slot: int
    frame_start: int
    frame_end: int
    behavior: BehaviorClass

    @property
    def cells(self) -> set[tuple[int, int]]:
        return {(self.slot, f) for f in range(self.frame_start, self.frame_end + 1)}


def inject_deviation(
    log: MatchLog, specs: Sequence[DeviationSpec]
) -> tuple[MatchLog, list[DeviationLabel]]:
    """Force behaviors/displacements on the named frame spans. Only the named
    frame x slot cells change; labels are returned for recall scoring."""
    n = len(log.frames)
    for spec in specs:
        if not (0 <= spec.t0 <= spec.t1):
            raise SpanError(f"bad span [{spec.t0}, {spec.t1}]")
        if spec.t1 >= n:
            raise SpanError(f"span end {spec.t1} exceeds match length {n}")
    if not specs:
        return log, []

    by_frame: dict[int, list[DeviationSpec]] = {}
    for spec in specs:
        for fi in range(spec.t0, spec.t1 + 1):
            by_frame.setdefault(fi, []).append(spec)

    frames = list(log.frames)
    for fi, frame_specs in by_frame.items():
        champs = list(frames[fi].champions)
        for spec in frame_specs:
            c = champs[spec.slot]
            dx, dy = spec.displacement
            champs[spec.slot] = replace(
                c,
                behavior=spec.behavior,
                global_pos=(
                    round(float(np.clip(c.global_pos[0] + dx, 0.0, 1.0)), 6),
                    round(float(np.clip(c.global_pos[1] + dy, 0.0, 1.0)), 6),
                ),
            )
        frames[fi] = replace(frames[fi], champions=tuple(champs))

    labels = [DeviationLabel(s.slot, s.t0, s.t1, s.behavior) for s in specs]
    return replace(log, frames=tuple(frames)), labels
