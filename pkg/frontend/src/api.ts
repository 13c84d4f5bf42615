// Typed client for the read-only analysis service. Payload shapes mirror the
// server contract exactly; nothing is recomputed client-side.

export interface MatchListEntry {
  match_id: string;
  event_name: string;
  teams: Record<string, string>;
  winner: string;
  n_frames: number;
  duration_s: number;
  has_bundle: boolean;
}

export interface PlayerSeat {
  name: string;
  role: string;
  team: string;
  champion: string;
}

export interface MatchSummary {
  match_id: string;
  event_name: string;
  teams: Record<string, string>;
  players: PlayerSeat[];
  winner: string;
  n_frames: number;
  t_start: number;
  t_end: number;
  summary: Record<string, unknown>;
}

export interface ChampionFrame {
  champion_id: string;
  role: string;
  team: string;
  hp_norm: number;
  mana_norm: number;
  gold: number;
  level: number;
  global_pos: [number, number];
  local_pos: [number, number] | null;
  behavior: string;
}

export interface GoldDiff {
  blue_total: number;
  per_role: Record<string, number>;
}

export interface FramePayload {
  t: number;
  champions: ChampionFrame[];
  events: Array<Record<string, unknown>>;
  gold_diff: GoldDiff;
}

export interface FramesResponse {
  match_id: string;
  frames: FramePayload[];
}

export interface PriorityEventJson {
  id: string;
  kind: string;
  t: number;
  credited_team: string;
  detail: string | null;
}

export interface PredictedBehavior {
  behavior: string;
  prob: number;
}

export interface RecordJson {
  id: string;
  slot: number;
  t_start: number;
  t_end: number;
  frame_start: number;
  frame_end: number;
  observed_behavior: string;
  predicted_top3: PredictedBehavior[];
  predicted_coords: [number, number];
  observed_coords: [number, number];
  coord_discrepancy: number;
}

export interface ImpactJson {
  record_id: string;
  event_id: string;
  raw_delta: number;
  normalized: number;
}

export interface InconsistenciesResponse {
  match_id: string;
  model_version: string;
  records: RecordJson[];
  impacts: ImpactJson[] | null;
}

export type AttributionGroups = Record<string, number>;

export interface AttributionFrame {
  t: number;
  values: AttributionGroups;
}

export interface AttributionSeriesJson {
  record_id: string;
  slot: number;
  target_behavior: string;
  frames: AttributionFrame[];
}

export interface AttributionResponse {
  match_id: string;
  series: AttributionSeriesJson[];
}

export interface TeamProfileResponse {
  team: string;
  event: string;
  radar: Record<string, number>;
  aggro: Array<Record<string, unknown>>;
  combos: { by_picks: unknown[]; by_win_rate: unknown[] };
  carry_scores: Record<string, Record<string, number>>;
}

export interface PlayerProfileResponse {
  player: string;
  event: string;
  champion: string;
  radar: Record<string, number>;
  loadout: { items: string[] } | null;
  heatmap: { grid: number; counts: number[][] };
}

export interface ApiErrorBody {
  status: number;
  code: string;
  message: string;
}

export class ApiRequestError extends Error {
  constructor(public readonly body: ApiErrorBody) {
    super(body.message);
  }
}

/** Minimal transport so tests can inject fixture responses. */
export type FetchJson = (url: string) => Promise<unknown>;

function defaultFetch(url: string): Promise<unknown> {
  return fetch(url).then(async (resp) => {
    const body = await resp.json();
    if (!resp.ok) throw new ApiRequestError(body as ApiErrorBody);
    return body;
  });
}

function query(params: Record<string, string | number | undefined>): string {
  const parts = Object.entries(params)
    .filter(([, v]) => v !== undefined)
    .map(([k, v]) => `${k}=${encodeURIComponent(String(v))}`);
  return parts.length ? `?${parts.join('&')}` : '';
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchJson: FetchJson = defaultFetch,
  ) {}

  private get<T>(path: string): Promise<T> {
    return this.fetchJson(this.baseUrl + path) as Promise<T>;
  }

  matches(): Promise<MatchListEntry[]> {
    return this.get('/api/matches');
  }

  summary(matchId: string): Promise<MatchSummary> {
    return this.get(`/api/matches/${matchId}`);
  }

  frames(matchId: string, fromT?: number, toT?: number): Promise<FramesResponse> {
    return this.get(`/api/matches/${matchId}/frames${query({ from: fromT, to: toT })}`);
  }

  events(matchId: string): Promise<{ match_id: string; events: PriorityEventJson[] }> {
    return this.get(`/api/matches/${matchId}/events`);
  }

  inconsistencies(matchId: string, eventId?: string): Promise<InconsistenciesResponse> {
    return this.get(`/api/matches/${matchId}/inconsistencies${query({ event: eventId })}`);
  }

  attribution(
    matchId: string,
    opts: { slot?: number; fromT?: number; toT?: number } = {},
  ): Promise<AttributionResponse> {
    return this.get(
      `/api/matches/${matchId}/attribution${query({
        slot: opts.slot,
        from: opts.fromT,
        to: opts.toT,
      })}`,
    );
  }

  teamProfile(team: string, event: string): Promise<TeamProfileResponse> {
    return this.get(`/api/teams/${encodeURIComponent(team)}/profile${query({ event })}`);
  }

  playerProfile(
    player: string,
    event: string,
    champion: string,
  ): Promise<PlayerProfileResponse> {
    return this.get(
      `/api/players/${encodeURIComponent(player)}/profile${query({ event, champion })}`,
    );
  }
}
