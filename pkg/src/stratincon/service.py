"""Read-only HTTP API over a workspace, serving the review UI.

All endpoints are deterministic for an unchanged workspace; there is no
mutable state beyond a parse cache filled on demand. Ingestion, training, and
analysis happen through the CLI.
"""

from __future__ import annotations

import argparse
import os
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import profiles as prof
from .events import extract_priority_events
from .store import CorruptEntity, NotFound, Workspace
from .telemetry import (
    ROLE_ORDER,
    MatchLog,
    Team,
    gold_diff_series,
    lane_gold_diffs,
    parse_match_log,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class MatchIndex:
    """Parse-on-demand cache over the workspace's matches."""

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self._cache: dict[str, MatchLog] = {}

    def ids(self) -> list[str]:
        return self.workspace.list_matches()

    def get(self, match_id: str) -> MatchLog:
        if match_id not in self._cache:
            try:
                raw = self.workspace.get_match(match_id)
            except NotFound:
                raise ApiError(404, "match_not_found", f"no match {match_id!r}")
            except CorruptEntity as exc:
                raise ApiError(500, "corrupt_match", str(exc))
            self._cache[match_id] = parse_match_log(raw)
        return self._cache[match_id]

    def all_matches(self) -> list[MatchLog]:
        return [self.get(mid) for mid in self.ids()]

    def bundle(self, match_id: str):
        try:
            return self.workspace.get_bundle(match_id)
        except NotFound:
            raise ApiError(404, "bundle_not_found", f"no analysis bundle for {match_id!r}")
        except CorruptEntity as exc:
            raise ApiError(500, "corrupt_bundle", str(exc))


def _frame_json(log: MatchLog, index: int, lanes: dict) -> dict:
    frame = log.frames[index]
    blue = sum(c.gold for c in frame.champions[:5])
    red = sum(c.gold for c in frame.champions[5:])
    return {
        "t": frame.t,
        "champions": [c.to_json() for c in frame.champions],
        "events": [e.to_json() for e in frame.raw_events],
        "gold_diff": {
            "blue_total": blue - red,
            "per_role": {role.value: lanes[role][index][1] for role in ROLE_ORDER},
        },
    }


def create_app(workspace_path: str | Path) -> FastAPI:
    workspace = Workspace(workspace_path)
    index = MatchIndex(workspace)
    app = FastAPI(title="stratincon", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.get("/api/matches")
    def list_matches():
        bundles = set(workspace.list_bundles())
        out = []
        for mid in index.ids():
            log = index.get(mid)
            out.append(
                {
                    "match_id": mid,
                    "event_name": log.event_name,
                    "teams": log.teams,
                    "winner": log.winner,
                    "n_frames": len(log.frames),
                    "duration_s": log.duration_s,
                    "has_bundle": mid in bundles,
                }
            )
        return out

    @app.get("/api/matches/{match_id}")
    def match_summary(match_id: str):
        log = index.get(match_id)
        return {
            "match_id": log.match_id,
            "event_name": log.event_name,
            "teams": log.teams,
            "players": [p.to_json() for p in log.players],
            "winner": log.winner,
            "n_frames": len(log.frames),
            "t_start": log.frames[0].t,
            "t_end": log.frames[-1].t,
            "summary": log.summary,
        }

    @app.get("/api/matches/{match_id}/frames")
    def frames(
        match_id: str,
        from_t: Optional[float] = Query(default=None, alias="from"),
        to_t: Optional[float] = Query(default=None, alias="to"),
    ):
        log = index.get(match_id)
        lanes = lane_gold_diffs(log, Team.BLUE)
        lo = from_t if from_t is not None else log.frames[0].t
        hi = to_t if to_t is not None else log.frames[-1].t
        return {
            "match_id": match_id,
            "frames": [
                _frame_json(log, i, lanes)
                for i, f in enumerate(log.frames)
                if lo <= f.t <= hi
            ],
        }

    @app.get("/api/matches/{match_id}/events")
    def events(match_id: str):
        log = index.get(match_id)
        return {"match_id": match_id, "events": [e.to_json() for e in extract_priority_events(log)]}

    @app.get("/api/matches/{match_id}/inconsistencies")
    def inconsistencies(match_id: str, event: Optional[str] = None):
        bundle = index.bundle(match_id)
        impacts = None
        if event is not None:
            if event not in bundle.impacts:
                raise ApiError(422, "unknown_event", f"no event {event!r} in match {match_id!r}")
            impacts = bundle.impacts[event]
        return {
            "match_id": match_id,
            "model_version": bundle.model_version,
            "records": bundle.records,
            "impacts": impacts,
        }

    @app.get("/api/matches/{match_id}/attribution")
    def attribution(
        match_id: str,
        slot: Optional[int] = None,
        from_t: Optional[float] = Query(default=None, alias="from"),
        to_t: Optional[float] = Query(default=None, alias="to"),
    ):
        bundle = index.bundle(match_id)
        series = list(bundle.attributions.values())
        if slot is not None:
            series = [s for s in series if s["slot"] == slot]
        if from_t is not None or to_t is not None:
            lo = from_t if from_t is not None else float("-inf")
            hi = to_t if to_t is not None else float("inf")
            series = [
                {**s, "frames": [f for f in s["frames"] if lo <= f["t"] <= hi]}
                for s in series
            ]
        return {"match_id": match_id, "series": series}

    @app.get("/api/teams/{team}/profile")
    def team_profile(team: str, event: str):
        matches = [m for m in index.all_matches() if m.event_name == event]
        try:
            radar, _ = prof.compute_team_radar(matches, team, event)
        except prof.NoMatches as exc:
            raise ApiError(404, "team_not_found", str(exc))
        try:
            aggro = [a.to_json() for a in prof.cluster_aggro(matches, team)]
        except prof.TooFewMatches:
            aggro = []
        try:
            combos = prof.mine_combos(matches, team)
            combos_json = {
                "by_picks": [c.to_json() for c in combos.by_picks],
                "by_win_rate": [c.to_json() for c in combos.by_win_rate],
            }
        except prof.NoMatches:
            combos_json = {"by_picks": [], "by_win_rate": []}
        carry = {
            m.match_id: {r.value: s for r, s in prof.compute_carry_scores(m, team).items()}
            for m in matches
            if team in m.teams.values()
        }
        return {
            "team": team,
            "event": event,
            "radar": radar.to_json(),
            "aggro": aggro,
            "combos": combos_json,
            "carry_scores": carry,
        }

    @app.get("/api/players/{player}/profile")
    def player_profile(player: str, event: str, champion: str):
        matches = [m for m in index.all_matches() if m.event_name == event]
        try:
            radar, _ = prof.compute_player_radar(matches, player, champion, event)
        except prof.NoMatches as exc:
            raise ApiError(404, "player_not_found", str(exc))
        try:
            loadout = prof.loadout_preferences(matches, player, champion).to_json()
        except prof.MissingLoadoutData:
            loadout = None
        heatmap, _ = prof.movement_heatmap(matches, player, champion)
        return {
            "player": player,
            "event": event,
            "champion": champion,
            "radar": radar.to_json(),
            "loadout": loadout,
            "heatmap": {"grid": heatmap.shape[0], "counts": heatmap.tolist()},
        }

    return app


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(prog="stratincon-serve")
    parser.add_argument("--workspace", default=os.environ.get("STRATINCON_WORKSPACE", "."))
    parser.add_argument("--bind", default="127.0.0.1:8080")
    args = parser.parse_args(argv)
    host, _, port = args.bind.partition(":")
    import uvicorn

    uvicorn.run(create_app(args.workspace), host=host or "127.0.0.1", port=int(port or 8080))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
