// In-memory workspace mirroring the service payloads. The headline record
// r001 sits at t = 566 s (09:26): observed Inaction while Champion is
// predicted at 0.97, with attribution frames covering 9:21 through 9:25.

import {
  AttributionSeriesJson,
  FetchJson,
  FramePayload,
  ImpactJson,
  PriorityEventJson,
  RecordJson,
} from '../src/api';

export const MATCH_ID = 'fix-0001';

const roles = ['Top', 'Jungler', 'Mid', 'Bot', 'Support'];

export const summary = {
  match_id: MATCH_ID,
  event_name: 'Fixture Cup',
  teams: { Blue: 'Azure', Red: 'Crimson' },
  players: Array.from({ length: 10 }, (_, slot) => ({
    name: `p${slot}`,
    role: roles[slot % 5],
    team: slot < 5 ? 'Blue' : 'Red',
    champion: `c${slot}`,
  })),
  winner: 'Azure',
  n_frames: 601,
  t_start: 0,
  t_end: 600,
  summary: {},
};

function frame(t: number, blueLead: number): FramePayload {
  return {
    t,
    champions: Array.from({ length: 10 }, (_, slot) => ({
      champion_id: `c${slot}`,
      role: roles[slot % 5],
      team: slot < 5 ? 'Blue' : 'Red',
      hp_norm: 0.8,
      mana_norm: 0.6,
      gold: 500 + t,
      level: 5,
      global_pos: [0.1 * slot, 0.5] as [number, number],
      local_pos: null,
      behavior: 'Minion',
    })),
    events: [],
    gold_diff: {
      blue_total: blueLead,
      per_role: Object.fromEntries(roles.map((r, i) => [r, blueLead / 5 + i])),
    },
  };
}

export const frames: FramePayload[] = [
  frame(0, 0),
  frame(100, 150),
  frame(566, -420),
  frame(590, -600),
];

export const events: PriorityEventJson[] = [
  { id: 'baron@590', kind: 'baron', t: 590, credited_team: 'Red', detail: null },
  { id: 'elder_dragon@598', kind: 'elder_dragon', t: 598, credited_team: 'Blue', detail: null },
];

export const records: RecordJson[] = [
  {
    id: 'r000',
    slot: 0,
    t_start: 100,
    t_end: 104,
    frame_start: 100,
    frame_end: 104,
    observed_behavior: 'Resource',
    predicted_top3: [
      { behavior: 'Minion', prob: 0.81 },
      { behavior: 'Champion', prob: 0.12 },
      { behavior: 'Turret', prob: 0.04 },
    ],
    predicted_coords: [0.3, 0.4],
    observed_coords: [0.32, 0.41],
    coord_discrepancy: 0.022,
  },
  {
    id: 'r001',
    slot: 2,
    t_start: 566,
    t_end: 566,
    frame_start: 566,
    frame_end: 566,
    observed_behavior: 'Inaction',
    predicted_top3: [
      { behavior: 'Champion', prob: 0.97 },
      { behavior: 'Minion', prob: 0.02 },
      { behavior: 'Resource', prob: 0.01 },
    ],
    predicted_coords: [0.62, 0.3],
    observed_coords: [0.5, 0.5],
    coord_discrepancy: 0.233,
  },
];

export const impactsByEvent: Record<string, ImpactJson[]> = {
  'baron@590': [
    { record_id: 'r000', event_id: 'baron@590', raw_delta: 1200, normalized: 1.0 },
    { record_id: 'r001', event_id: 'baron@590', raw_delta: 480, normalized: 0.4 },
  ],
  'elder_dragon@598': [
    { record_id: 'r000', event_id: 'elder_dragon@598', raw_delta: 350, normalized: 0.5 },
    { record_id: 'r001', event_id: 'elder_dragon@598', raw_delta: 700, normalized: 1.0 },
  ],
};

export const attributions: AttributionSeriesJson[] = [
  {
    record_id: 'r000',
    slot: 0,
    target_behavior: 'Minion',
    // deliberate gap between t=96 and t=98
    frames: [96 - 1, 96, 98, 99].map((t) => ({
      t,
      values: { blood: 0.1, gold: 0.2, coordinates: -0.3, behavior: 0.4 },
    })),
  },
  {
    record_id: 'r001',
    slot: 2,
    target_behavior: 'Champion',
    frames: [561, 562, 563, 564, 565].map((t) => ({
      t,
      values: { blood: -0.2, gold: -0.1, coordinates: 0.4, behavior: 0.3 },
    })),
  },
];

/** Routes API urls onto the fixtures, emulating server-side filtering. */
export function fixtureFetch(log?: string[]): FetchJson {
  return async (url: string) => {
    log?.push(url);
    const [path, queryString] = url.split('?');
    const params = new URLSearchParams(queryString ?? '');
    if (path === '/api/matches') return [summary];
    if (path === `/api/matches/${MATCH_ID}`) return summary;
    if (path === `/api/matches/${MATCH_ID}/frames`) {
      const lo = params.has('from') ? Number(params.get('from')) : -Infinity;
      const hi = params.has('to') ? Number(params.get('to')) : Infinity;
      return { match_id: MATCH_ID, frames: frames.filter((f) => lo <= f.t && f.t <= hi) };
    }
    if (path === `/api/matches/${MATCH_ID}/events`) {
      return { match_id: MATCH_ID, events };
    }
    if (path === `/api/matches/${MATCH_ID}/inconsistencies`) {
      const event = params.get('event');
      if (event && !(event in impactsByEvent)) {
        throw new Error('unknown_event');
      }
      return {
        match_id: MATCH_ID,
        model_version: 'fixture0000000001',
        records,
        impacts: event ? impactsByEvent[event] : null,
      };
    }
    if (path === `/api/matches/${MATCH_ID}/attribution`) {
      let series = attributions;
      if (params.has('slot')) {
        series = series.filter((s) => s.slot === Number(params.get('slot')));
      }
      return { match_id: MATCH_ID, series };
    }
    throw new Error(`unrouted url ${url}`);
  };
}
