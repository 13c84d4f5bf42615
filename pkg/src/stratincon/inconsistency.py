"""Detection of strategy inconsistencies, event-relative impact scoring, and
occlusion-based feature attribution.

A frame is flagged for a champion when the observed behavior differs from the
predicted top-1 preferred behavior and the prediction's confidence clears the
threshold. Consecutive flagged frames with the same (slot, observed, top-1)
merge into one record. Coordinate discrepancy is reported on the record but
never creates one by itself (see detect_coordinate_alerts for the opt-in
coordinate-only pass).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol, Sequence

import numpy as np

from .events import PriorityEvent
from .matchgen import GroundTruth, phase_of
from .predictor import (
    PredictorModel,
    StrategyPrediction,
    WindowSample,
    build_windows,
    forward,
)
from .telemetry import (
    SLOT_COUNT,
    BehaviorClass,
    MatchLog,
    NormalizationStats,
    Team,
    gold_diff_series,
    role_of_slot,
    series_value_at,
    team_of_slot,
)

FEATURE_GROUPS: dict[str, tuple[int, ...]] = {
    "blood": (0,),
    "gold": (1,),
    "coordinates": (2, 3),
    "behavior": (4, 5, 6, 7, 8),
}
GROUP_ORDER = ("blood", "gold", "coordinates", "behavior")

DEFAULT_TAU = 0.5


class ModelMismatch(Exception):
    """Predictor lacks the normalization stats needed to encode windows."""


class EventBeforeRecord(Exception):
    """The selected event happens before the record starts; the record is
    excluded from that event's impact ranking."""


class StrategyPredictor(Protocol):
    stats: NormalizationStats

    def predict(self, log: MatchLog, sample: WindowSample) -> list[StrategyPrediction]:
        ...


class ModelPredictor:
    """Adapts a trained model to the detection loop."""

    def __init__(self, model: PredictorModel):
        if model.stats is None:
            raise ModelMismatch("model carries no normalization stats")
        self.model = model
        self.stats = model.stats

    def predict(self, log: MatchLog, sample: WindowSample) -> list[StrategyPrediction]:
        return forward(self.model, sample.x)


class OraclePredictor:
    """Ground-truth-policy predictor built from a generated match's
    GroundTruth; predicts the policy's next-behavior distribution and the
    pre-jitter waypoint position."""

    def __init__(self, truth: GroundTruth):
        self.truth = truth
        self.stats = NormalizationStats(0, 1)

    def predict(self, log: MatchLog, sample: WindowSample) -> list[StrategyPrediction]:
        fi = sample.frame_index
        preds = []
        for slot in range(SLOT_COUNT):
            prior = log.frames[fi - 1].champions[slot].behavior
            probs = self.truth.policy.predicted_probs(
                role_of_slot(slot), phase_of(fi, self.truth.n_frames), prior
            )
            order = sorted(range(5), key=lambda k: (-probs[k], k))
            top_k = tuple((BehaviorClass(k), float(probs[k])) for k in order)
            coords = self.truth.clean_positions[fi][slot]
            preds.append(
                StrategyPrediction(
                    coords=(float(coords[0]), float(coords[1])),
                    behavior_probs=probs,
                    top_k=top_k,
                )
            )
        return preds


@dataclass(frozen=True)
class InconsistencyRecord:
    record_id: str
    slot: int
    t_start: float
    t_end: float
    frame_start: int  # target-frame index range within the MatchLog
    frame_end: int
    observed_behavior: BehaviorClass
    predicted_top3: tuple[tuple[BehaviorClass, float], ...]
    predicted_coords: tuple[float, float]
    observed_coords: tuple[float, float]
    coord_discrepancy: float

    @property
    def team(self) -> Team:
        return team_of_slot(self.slot)

    def to_json(self) -> dict:
        return {
            "id": self.record_id,
            "slot": self.slot,
            "t_start": self.t_start,
            "t_end": self.t_end,
            "frame_start": self.frame_start,
            "frame_end": self.frame_end,
            "observed_behavior": self.observed_behavior.name.capitalize(),
            "predicted_top3": [
                {"behavior": b.name.capitalize(), "prob": p} for b, p in self.predicted_top3
            ],
            "predicted_coords": list(self.predicted_coords),
            "observed_coords": list(self.observed_coords),
            "coord_discrepancy": self.coord_discrepancy,
        }

    @staticmethod
    def from_json(obj: dict) -> "InconsistencyRecord":
        return InconsistencyRecord(
            record_id=obj["id"],
            slot=int(obj["slot"]),
            t_start=float(obj["t_start"]),
            t_end=float(obj["t_end"]),
            frame_start=int(obj["frame_start"]),
            frame_end=int(obj["frame_end"]),
            observed_behavior=BehaviorClass[obj["observed_behavior"].upper()],
            predicted_top3=tuple(
                (BehaviorClass[e["behavior"].upper()], float(e["prob"]))
                for e in obj["predicted_top3"]
            ),
            predicted_coords=tuple(obj["predicted_coords"]),
            observed_coords=tuple(obj["observed_coords"]),
            coord_discrepancy=float(obj["coord_discrepancy"]),
        )


@dataclass(frozen=True)
class _Flag:
    slot: int
    frame_index: int
    t: float
    observed: BehaviorClass
    prediction: StrategyPrediction
    observed_coords: tuple[float, float]


def detect_inconsistencies(
    predictor: StrategyPredictor,
    log: MatchLog,
    tau: float = DEFAULT_TAU,
    gap_max: float = 2.0,
) -> list[InconsistencyRecord]:
    """Run the predictor over every window of the match and merge flagged
    target frames into records, ordered by start time."""
    if not (0.0 < tau <= 1.0):
        raise ValueError("tau must be in (0, 1]")
    samples = build_windows(log, predictor.stats, gap_max=gap_max)
    flags_by_slot: dict[int, list[_Flag]] = {slot: [] for slot in range(SLOT_COUNT)}
    for sample in samples:
        preds = predictor.predict(log, sample)
        frame = log.frames[sample.frame_index]
        for slot in range(SLOT_COUNT):
            pred = preds[slot]
            observed = frame.champions[slot].behavior
            if observed != pred.top1 and pred.top1_prob >= tau:
                flags_by_slot[slot].append(
                    _Flag(
                        slot=slot,
                        frame_index=sample.frame_index,
                        t=frame.t,
                        observed=observed,
                        prediction=pred,
                        observed_coords=frame.champions[slot].global_pos,
                    )
                )

    merged: list[list[_Flag]] = []
    for slot in range(SLOT_COUNT):
        run: list[_Flag] = []
        for flag in flags_by_slot[slot]:
            if (
                run
                and flag.frame_index == run[-1].frame_index + 1
                and flag.observed == run[-1].observed
                and flag.prediction.top1 == run[-1].prediction.top1
            ):
                run.append(flag)
            else:
                if run:
                    merged.append(run)
                run = [flag]
        if run:
            merged.append(run)

    merged.sort(key=lambda r: (r[0].t, r[0].slot))
    records = []
    for n, run in enumerate(merged):
        first = run[0]
        pred = first.prediction
        dx = pred.coords[0] - first.observed_coords[0]
        dy = pred.coords[1] - first.observed_coords[1]
        records.append(
            InconsistencyRecord(
                record_id=f"r{n:03d}",
                slot=first.slot,
                t_start=first.t,
                t_end=run[-1].t,
                frame_start=first.frame_index,
                frame_end=run[-1].frame_index,
                observed_behavior=first.observed,
                predicted_top3=pred.top_k[:3],
                predicted_coords=pred.coords,
                observed_coords=first.observed_coords,
                coord_discrepancy=float(np.hypot(dx, dy)),
            )
        )
    return records


@dataclass(frozen=True)
class CoordinateAlert:
    slot: int
    t: float
    distance: float
    predicted_coords: tuple[float, float]
    observed_coords: tuple[float, float]


def detect_coordinate_alerts(
    predictor: StrategyPredictor,
    log: MatchLog,
    delta: float = 0.1,
    gap_max: float = 2.0,
) -> list[CoordinateAlert]:
    """Opt-in pass for coordinate-only discrepancies (distance > delta) that
    do not change the behavior-keyed record set."""
    alerts = []
    for sample in build_windows(log, predictor.stats, gap_max=gap_max):
        preds = predictor.predict(log, sample)
        frame = log.frames[sample.frame_index]
        for slot in range(SLOT_COUNT):
            observed = frame.champions[slot].global_pos
            pred = preds[slot]
            dist = float(np.hypot(pred.coords[0] - observed[0], pred.coords[1] - observed[1]))
            if dist > delta:
                alerts.append(
                    CoordinateAlert(slot, frame.t, dist, pred.coords, observed)
                )
    return alerts


@dataclass(frozen=True)
class ImpactScore:
    record_id: str
    event_id: str
    raw_delta: int  # gold
    normalized: float

    def to_json(self) -> dict:
        return {
            "record_id": self.record_id,
            "event_id": self.event_id,
            "raw_delta": self.raw_delta,
            "normalized": self.normalized,
        }


def impact_raw_delta(
    record: InconsistencyRecord, event: PriorityEvent, series: list[tuple[float, int]]
) -> int:
    """|D(event.t) - D(record.t_start)| with D the gold difference from the
    record's team's perspective."""
    if event.t <= record.t_start:
        raise EventBeforeRecord(
            f"event {event.event_id} at {event.t} precedes record {record.record_id}"
        )
    return abs(series_value_at(series, event.t) - series_value_at(series, record.t_start))


def compute_impact(
    record: InconsistencyRecord,
    event: PriorityEvent,
    series: list[tuple[float, int]],
    match_max_delta: int,
) -> ImpactScore:
    raw = impact_raw_delta(record, event, series)
    normalized = raw / match_max_delta if match_max_delta > 0 else 0.0
    return ImpactScore(record.record_id, event.event_id, raw, normalized)


def compute_impacts(
    records: Sequence[InconsistencyRecord], event: PriorityEvent, log: MatchLog
) -> list[ImpactScore]:
    """Impacts for every record preceding the event, normalized by the match
    maximum so exactly one impact is 1 unless every raw delta is 0."""
    series_by_team = {
        team: gold_diff_series(log, team) for team in (Team.BLUE, Team.RED)
    }
    eligible = [r for r in records if event.t > r.t_start]
    raws = {r.record_id: impact_raw_delta(r, event, series_by_team[r.team]) for r in eligible}
    match_max = max(raws.values(), default=0)
    return [
        ImpactScore(r.record_id, event.event_id, raws[r.record_id],
                    raws[r.record_id] / match_max if match_max > 0 else 0.0)
        for r in eligible
    ]


@dataclass(frozen=True)
class AttributionSeries:
    """Signed per-frame contributions of the four feature groups to the top-1
    behavior probability, normalized per frame so the absolute values sum to
    1 (all-zero frames stay zero)."""

    values: np.ndarray  # (5, 4) in GROUP_ORDER
    groups: tuple[str, ...]
    target_behavior: BehaviorClass
    t_target: float

    def to_json(self) -> dict:
        return {
            "groups": list(self.groups),
            "values": [[float(v) for v in row] for row in self.values],
            "target_behavior": self.target_behavior.name.capitalize(),
            "t_target": self.t_target,
        }


def attribute_features(
    model: PredictorModel, sample: WindowSample, champion_slot: int
) -> AttributionSeries:
    """Occlusion attribution: for each window frame and feature group, the
    drop in the top-1 behavior probability when that frame's group values (all
    ten champions) are replaced by the window mean of the group. Positive
    values support the prediction."""
    full = forward(model, sample.x)[champion_slot]
    top1 = full.top1
    p_full = float(full.behavior_probs[int(top1)])

    baseline = sample.x.mean(axis=(0, 1))  # per-feature mean over frames x champions
    values = np.zeros((sample.x.shape[0], len(GROUP_ORDER)))
    for f in range(sample.x.shape[0]):
        for gi, group in enumerate(GROUP_ORDER):
            idx = list(FEATURE_GROUPS[group])
            occluded = sample.x.copy()
            occluded[f, :, idx] = baseline[idx][:, None]
            p_occ = float(forward(model, occluded)[champion_slot].behavior_probs[int(top1)])
            values[f, gi] = p_full - p_occ

    for f in range(values.shape[0]):
        total = np.abs(values[f]).sum()
        if total > 0:
            values[f] /= total
    return AttributionSeries(
        values=values,
        groups=GROUP_ORDER,
        target_behavior=top1,
        t_target=sample.t_target,
    )
