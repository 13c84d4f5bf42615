"""Historical team and player analytics.

All operations aggregate over an immutable corpus of parsed match logs. The
per-player damage/teamfight/loadout numbers live in each log's summary block
(frame data carries no damage); see docs/log_format.md.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .events import EPIC_MONSTERS, extract_priority_events
from .telemetry import ROLE_ORDER, MatchLog, Role, Team


class NoMatches(Exception):
    """The corpus holds no matches for the requested team/player."""


class TooFewMatches(Exception):
    """Aggro clustering needs at least two victorious matches."""


class MissingLoadoutData(Exception):
    """Logs carry no loadout metadata; the preference view degrades."""


TEAM_RADAR_AXES = (
    "avg_damage",
    "avg_economy",
    "avg_damage_taken",
    "first_blood_rate",
    "avg_tower_pushes",
    "resource_control_rate",
)

PLAYER_RADAR_AXES = (
    "damage_per_min",
    "damage_taken_per_min",
    "damage_conversion",
    "teamfight_participation",
    "creep_score_per_min",
)


@dataclass(frozen=True)
class TeamRadar:
    values: dict[str, float]  # axis -> [0, 1]

    def to_json(self) -> dict:
        return dict(self.values)


@dataclass(frozen=True)
class PlayerRadar:
    values: dict[str, float]

    def to_json(self) -> dict:
        return dict(self.values)


def _event_matches(matches: Sequence[MatchLog], event: str) -> list[MatchLog]:
    return [m for m in matches if m.event_name == event]


def _team_matches(matches: Sequence[MatchLog], team: str) -> list[MatchLog]:
    return [m for m in matches if team in m.teams.values()]


def _team_slots(log: MatchLog, team: str) -> range:
    return range(0, 5) if log.side_of(team) is Team.BLUE else range(5, 10)


def _team_raw_metrics(log: MatchLog, team: str) -> dict[str, float]:
    side = log.side_of(team)
    slots = _team_slots(log, team)
    players = log.summary.get("players", {})
    seat_names = [log.seat(s).name for s in slots]
    damage = sum(players.get(n, {}).get("damage", 0.0) for n in seat_names)
    taken = sum(players.get(n, {}).get("damage_taken", 0.0) for n in seat_names)
    economy = sum(log.frames[-1].champions[s].gold for s in slots)

    towers = 0
    first_blood = 0.0
    secured = 0
    contested = 0
    seen_kill = False
    for frame in log.frames:
        for mark in frame.raw_events:
            if mark.kind == "kill" and not seen_kill:
                seen_kill = True
                if mark.team is side:
                    first_blood = 1.0
            elif mark.kind == "turret" and mark.team is side:
                towers += 1
            elif mark.kind == "monster" and mark.monster in EPIC_MONSTERS:
                contested += 1
                if mark.team is side:
                    secured += 1
    return {
        "damage": damage,
        "economy": float(economy),
        "damage_taken": taken,
        "first_blood": first_blood,
        "towers": float(towers),
        "secured": float(secured),
        "contested": float(contested),
    }


def _team_metric_averages(matches: Sequence[MatchLog], team: str) -> dict[str, float]:
    rows = [_team_raw_metrics(m, team) for m in matches]
    n = len(rows)
    contested = sum(r["contested"] for r in rows)
    secured = sum(r["secured"] for r in rows)
    return {
        "avg_damage": sum(r["damage"] for r in rows) / n,
        "avg_economy": sum(r["economy"] for r in rows) / n,
        "avg_damage_taken": sum(r["damage_taken"] for r in rows) / n,
        "first_blood_rate": sum(r["first_blood"] for r in rows) / n,
        "avg_tower_pushes": sum(r["towers"] for r in rows) / n,
        "resource_control_rate": secured / contested if contested > 0 else 0.0,
    }


def _minmax_normalize(value: float, lo: float, hi: float) -> float:
    if hi == lo:
        return 1.0  # degenerate axis: everyone ties at the top
    return min(1.0, max(0.0, (value - lo) / (hi - lo)))


def compute_team_radar(
    matches: Sequence[MatchLog],
    team: str,
    event: str,
    current_match: Optional[MatchLog] = None,
) -> tuple[TeamRadar, Optional[TeamRadar]]:
    """Six-axis radar, min-max normalized across all teams in the event so the
    event-best team scores 1 on each axis. The optional current match is
    normalized against the same bounds."""
    corpus = _event_matches(matches, event)
    team_names = sorted({name for m in corpus for name in m.teams.values()})
    if team not in team_names or not _team_matches(corpus, team):
        raise NoMatches(f"no matches for team {team!r} in event {event!r}")

    averages = {
        name: _team_metric_averages(_team_matches(corpus, name), name)
        for name in team_names
    }
    bounds = {
        axis: (
            min(a[axis] for a in averages.values()),
            max(a[axis] for a in averages.values()),
        )
        for axis in TEAM_RADAR_AXES
    }
    historical = TeamRadar(
        {axis: _minmax_normalize(averages[team][axis], *bounds[axis]) for axis in TEAM_RADAR_AXES}
    )
    current = None
    if current_match is not None:
        raw = _team_metric_averages([current_match], team)
        current = TeamRadar(
            {axis: _minmax_normalize(raw[axis], *bounds[axis]) for axis in TEAM_RADAR_AXES}
        )
    return historical, current


def compute_carry_scores(match: MatchLog, team: str) -> dict[Role, float]:
    """Final-frame gold per role divided by the team's max role gold."""
    slots = _team_slots(match, team)
    golds = {ROLE_ORDER[s % 5]: match.frames[-1].champions[s].gold for s in slots}
    top = max(golds.values())
    return {role: g / top if top > 0 else 0.0 for role, g in golds.items()}


def carry_position(match: MatchLog, team: str) -> Role:
    scores = compute_carry_scores(match, team)
    return max(ROLE_ORDER, key=lambda r: scores[r])


def kmeans2(
    features: np.ndarray, seed: int = 0, max_iter: int = 100, tol: float = 1e-6
) -> tuple[np.ndarray, np.ndarray]:
    """k=2 k-means with k-means++ seeding. Returns (labels, centroids).
    Deterministic for a fixed seed; SSE is non-increasing per iteration."""
    rng = np.random.default_rng(seed)
    n = features.shape[0]
    first = int(rng.integers(n))
    d2 = ((features - features[first]) ** 2).sum(axis=1)
    if d2.sum() > 0:
        second = int(rng.choice(n, p=d2 / d2.sum()))
    else:
        second = (first + 1) % n
    centroids = features[[first, second]].astype(np.float64).copy()

    labels = np.zeros(n, dtype=int)
    for _ in range(max_iter):
        dists = ((features[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = dists.argmin(axis=1)
        new_centroids = centroids.copy()
        for k in (0, 1):
            members = features[labels == k]
            if len(members):
                new_centroids[k] = members.mean(axis=0)
        shift = np.abs(new_centroids - centroids).max()
        centroids = new_centroids
        if shift <= tol:
            break
    return labels, centroids


@dataclass(frozen=True)
class AggroResult:
    match_id: str
    aggro_label: int
    aggro_score: float
    carry: Role

    def to_json(self) -> dict:
        return {
            "match_id": self.match_id,
            "aggro_label": self.aggro_label,
            "aggro_score": self.aggro_score,
            "carry": self.carry.value,
        }


def extract_aggro_features(matches: Sequence[MatchLog], team: str) -> tuple[list[MatchLog], np.ndarray]:
    """Victorious matches and their [KDA, drakes, towers, economy] features."""
    wins = [m for m in _team_matches(matches, team) if m.winner == team]
    feats = []
    for m in wins:
        side = m.side_of(team)
        players = m.summary.get("players", {})
        names = [m.seat(s).name for s in _team_slots(m, team)]
        kills = sum(players.get(n, {}).get("kills", 0) for n in names)
        deaths = sum(players.get(n, {}).get("deaths", 0) for n in names)
        assists = sum(players.get(n, {}).get("assists", 0) for n in names)
        kda = (kills + assists) / max(1, deaths)
        drakes = towers = 0
        for frame in m.frames:
            for mark in frame.raw_events:
                if mark.team is side:
                    if mark.kind == "monster" and mark.monster and mark.monster.startswith("drake"):
                        drakes += 1
                    elif mark.kind == "turret":
                        towers += 1
        economy = sum(m.frames[-1].champions[s].gold for s in _team_slots(m, team))
        feats.append([kda, float(drakes), float(towers), float(economy)])
    return wins, np.asarray(feats, dtype=np.float64)


def cluster_aggro(
    matches: Sequence[MatchLog],
    team: str,
    seed: int = 0,
    features: Optional[np.ndarray] = None,
) -> list[AggroResult]:
    """k=2 clustering of victorious-match features (z-scored per dimension).
    Label 1 goes to the cluster whose centroid has the larger z-score sum (the
    more aggressive one); aggro_score = 1 - d_own / (d_own + d_other)."""
    wins, feats = extract_aggro_features(matches, team)
    if features is not None:
        feats = np.asarray(features, dtype=np.float64)
    if len(wins) < 2 or feats.shape[0] < 2:
        raise TooFewMatches("need at least two victorious matches to cluster")

    mean = feats.mean(axis=0)
    std = feats.std(axis=0)
    std[std == 0] = 1.0
    z = (feats - mean) / std

    labels, centroids = kmeans2(z, seed=seed)
    if centroids[1].sum() < centroids[0].sum():
        labels = 1 - labels
        centroids = centroids[::-1].copy()

    results = []
    for i, m in enumerate(wins):
        d = np.sqrt(((z[i] - centroids) ** 2).sum(axis=1))
        own, other = d[labels[i]], d[1 - labels[i]]
        score = 0.5 if own + other == 0 else 1.0 - own / (own + other)
        results.append(
            AggroResult(
                match_id=m.match_id,
                aggro_label=int(labels[i]),
                aggro_score=float(score),
                carry=carry_position(m, team),
            )
        )
    return results


@dataclass(frozen=True)
class ComboStat:
    champions: tuple[str, ...]  # sorted
    picks: int
    wins: int

    @property
    def win_rate(self) -> float:
        return self.wins / self.picks if self.picks else 0.0

    def to_json(self) -> dict:
        return {
            "champions": list(self.champions),
            "picks": self.picks,
            "wins": self.wins,
            "win_rate": self.win_rate,
        }


@dataclass(frozen=True)
class ComboMiningResult:
    by_picks: tuple[ComboStat, ...]
    by_win_rate: tuple[ComboStat, ...]


def mine_combos(
    matches: Sequence[MatchLog], team: str, top_n: int = 5, min_picks: int = 2
) -> ComboMiningResult:
    """Counts every 2- and 3-champion subset of the team's picks per match.
    The win-rate list requires at least min_picks appearances."""
    counts: dict[tuple[str, ...], list[int]] = {}
    for m in _team_matches(matches, team):
        picks = sorted(m.seat(s).champion for s in _team_slots(m, team))
        won = m.winner == team
        for size in (2, 3):
            for combo in itertools.combinations(picks, size):
                entry = counts.setdefault(combo, [0, 0])
                entry[0] += 1
                entry[1] += 1 if won else 0
    stats = [ComboStat(c, picks, wins) for c, (picks, wins) in counts.items()]
    if not stats:
        raise NoMatches(f"no matches for team {team!r}")
    by_picks = sorted(stats, key=lambda s: (-s.picks, s.champions))[:top_n]
    by_win_rate = sorted(
        (s for s in stats if s.picks >= min_picks),
        key=lambda s: (-s.win_rate, -s.picks, s.champions),
    )[:top_n]
    return ComboMiningResult(tuple(by_picks), tuple(by_win_rate))


def _player_raw_metrics(log: MatchLog, player: str) -> dict[str, float]:
    stats = log.summary.get("players", {}).get(player)
    if stats is None:
        raise NoMatches(f"player {player!r} not in match {log.match_id} summary")
    minutes = max(log.duration_s / 60.0, 1e-9)
    damage = float(stats.get("damage", 0.0))
    return {
        "damage_per_min": damage / minutes,
        "damage_taken_per_min": float(stats.get("damage_taken", 0.0)) / minutes,
        "damage_conversion": float(stats.get("damage_to_champions", 0.0)) / damage
        if damage > 0
        else 0.0,
        "teamfight_participation": stats.get("teamfights_participated", 0)
        / max(1, stats.get("teamfights_total", 1)),
        "creep_score_per_min": float(stats.get("creep_score", 0.0)) / minutes,
    }


def _player_seat(log: MatchLog, player: str):
    for p in log.players:
        if p.name == player:
            return p
    return None


def _avg_metrics(rows: list[dict[str, float]]) -> dict[str, float]:
    return {axis: sum(r[axis] for r in rows) / len(rows) for axis in PLAYER_RADAR_AXES}


def compute_player_radar(
    matches: Sequence[MatchLog],
    player: str,
    champion: str,
    event: str,
    current_match: Optional[MatchLog] = None,
) -> tuple[PlayerRadar, Optional[PlayerRadar]]:
    """Five-axis radar over the player's matches on the given champion,
    min-max normalized against same-role players' event averages (the queried
    player's own value is included in the bounds pool, then clamped)."""
    corpus = _event_matches(matches, event)
    role = None
    champ_rows = []
    for m in corpus:
        seat = _player_seat(m, player)
        if seat is None:
            continue
        role = seat.role
        if seat.champion == champion:
            champ_rows.append(_player_raw_metrics(m, player))
    if not champ_rows or role is None:
        raise NoMatches(f"no matches for {player!r} on {champion!r} in {event!r}")

    peer_averages: dict[str, dict[str, float]] = {}
    for m in corpus:
        for seat in m.players:
            if seat.role is role:
                peer_averages.setdefault(seat.name, [])
    for name in peer_averages:
        rows = [
            _player_raw_metrics(m, name)
            for m in corpus
            if (s := _player_seat(m, name)) is not None and s.role is role
        ]
        peer_averages[name] = _avg_metrics(rows)

    value = _avg_metrics(champ_rows)
    pool = list(peer_averages.values()) + [value]
    bounds = {
        axis: (min(r[axis] for r in pool), max(r[axis] for r in pool))
        for axis in PLAYER_RADAR_AXES
    }
    historical = PlayerRadar(
        {axis: _minmax_normalize(value[axis], *bounds[axis]) for axis in PLAYER_RADAR_AXES}
    )
    current = None
    if current_match is not None:
        raw = _player_raw_metrics(current_match, player)
        current = PlayerRadar(
            {axis: _minmax_normalize(raw[axis], *bounds[axis]) for axis in PLAYER_RADAR_AXES}
        )
    return historical, current


@dataclass(frozen=True)
class LoadoutPreferences:
    items: tuple[str, ...]  # top 3 by frequency
    skills: tuple[str, ...]
    runes: tuple[str, ...]
    current: Optional[dict] = None

    def to_json(self) -> dict:
        return {
            "items": list(self.items),
            "skills": list(self.skills),
            "runes": list(self.runes),
            "current": self.current,
        }


def _top_by_frequency(sequences: list[list[str]], k: int = 3) -> tuple[str, ...]:
    counts: dict[str, int] = {}
    first_seen: dict[str, int] = {}
    order = 0
    for seq in sequences:
        for item in seq:
            counts[item] = counts.get(item, 0) + 1
            if item not in first_seen:
                first_seen[item] = order
            order += 1
    ranked = sorted(counts, key=lambda it: (-counts[it], first_seen[it]))
    return tuple(ranked[:k])


def loadout_preferences(
    matches: Sequence[MatchLog],
    player: str,
    champion: str,
    current_match: Optional[MatchLog] = None,
) -> LoadoutPreferences:
    """Top-3 items/skills/runes by frequency over the player's matches on the
    champion; ties go to the earlier-first-seen entry (corpus order)."""
    items, skills, runes = [], [], []
    for m in matches:
        seat = _player_seat(m, player)
        if seat is None or seat.champion != champion:
            continue
        stats = m.summary.get("players", {}).get(player, {})
        if "items" not in stats:
            continue
        items.append(list(stats.get("items", [])))
        skills.append(list(stats.get("skills", [])))
        runes.append(list(stats.get("runes", [])))
    if not items:
        raise MissingLoadoutData(f"no loadout data for {player!r} on {champion!r}")
    current = None
    if current_match is not None:
        stats = current_match.summary.get("players", {}).get(player, {})
        current = {
            "items": list(stats.get("items", [])),
            "skills": list(stats.get("skills", [])),
            "runes": list(stats.get("runes", [])),
        }
    return LoadoutPreferences(
        items=_top_by_frequency(items),
        skills=_top_by_frequency(skills),
        runes=_top_by_frequency(runes),
        current=current,
    )


def movement_heatmap(
    matches: Sequence[MatchLog],
    player: str,
    champion: Optional[str] = None,
    grid: int = 64,
    current_match: Optional[MatchLog] = None,
) -> tuple[np.ndarray, Optional[np.ndarray]]:
    """Bin counts of the player's global coordinates over [0,1]^2. The total
    equals the number of sampled frames; coordinate 1.0 lands in the last bin."""

    def accumulate(ms: Sequence[MatchLog]) -> np.ndarray:
        counts = np.zeros((grid, grid), dtype=np.int64)
        for m in ms:
            seat = _player_seat(m, player)
            if seat is None or (champion is not None and seat.champion != champion):
                continue
            from .telemetry import slot_of

            slot = slot_of(seat.team, seat.role)
            for frame in m.frames:
                x, y = frame.champions[slot].global_pos
                xi = min(int(x * grid), grid - 1)
                yi = min(int(y * grid), grid - 1)
                counts[xi, yi] += 1
        return counts

    historical = accumulate(list(matches))
    current = accumulate([current_match]) if current_match is not None else None
    return historical, current
