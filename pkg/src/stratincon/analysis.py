"""Builds per-match analysis bundles: detection + impacts + attributions."""

from __future__ import annotations

import datetime as _dt

from .events import extract_priority_events
from .inconsistency import (
    DEFAULT_TAU,
    ModelPredictor,
    attribute_features,
    compute_impacts,
    detect_inconsistencies,
)
from .predictor import PredictorModel, build_windows, model_fingerprint
from .profiles import compute_carry_scores
from .store import AnalysisBundle
from .telemetry import MatchLog


def build_bundle(
    log: MatchLog,
    model: PredictorModel,
    tau: float = DEFAULT_TAU,
    gap_max: float = 2.0,
) -> AnalysisBundle:
    """Deterministic for a fixed (model, match): the same inputs produce the
    same records, impacts, and attributions."""
    predictor = ModelPredictor(model)
    records = detect_inconsistencies(predictor, log, tau=tau, gap_max=gap_max)
    events = extract_priority_events(log)

    impacts = {
        ev.event_id: [imp.to_json() for imp in compute_impacts(records, ev, log)]
        for ev in events
    }

    samples = {s.frame_index: s for s in build_windows(log, model.stats, gap_max=gap_max)}
    attributions = {}
    for record in records:
        sample = samples.get(record.frame_start)
        if sample is None:
            continue
        series = attribute_features(model, sample, record.slot)
        window_ts = [log.frames[record.frame_start - 5 + k].t for k in range(5)]
        attributions[record.record_id] = {
            "record_id": record.record_id,
            "slot": record.slot,
            "target_behavior": series.target_behavior.name.capitalize(),
            "frames": [
                {
                    "t": window_ts[k],
                    "values": {
                        group: float(series.values[k, gi])
                        for gi, group in enumerate(series.groups)
                    },
                }
                for k in range(5)
            ],
        }

    profiles = {
        "carry_scores": {
            team: {role.value: score for role, score in compute_carry_scores(log, team).items()}
            for team in log.teams.values()
        }
    }
    return AnalysisBundle(
        match_id=log.match_id,
        model_version=model_fingerprint(model),
        created_at=_dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        records=[r.to_json() for r in records],
        impacts=impacts,
        attributions=attributions,
        events=[e.to_json() for e in events],
        profiles=profiles,
    )
