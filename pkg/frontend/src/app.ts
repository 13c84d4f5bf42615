// Controller wiring the API client, the view store, and the renderers. The
// rendered markup is a pure function of (API data, ViewState); async results
// are applied only if their generation is still current.

import {
  ApiClient,
  AttributionSeriesJson,
  FramePayload,
  InconsistenciesResponse,
  PriorityEventJson,
  RecordJson,
} from './api';
import { brushFrames, layoutGlyphs, timeScale, TimeScale } from './layout';
import {
  renderGoldBars,
  renderMagnifier,
  renderMinimap,
  renderTimeline,
  renderTooltip,
} from './render';
import { ViewStore } from './state';

export interface Snapshot {
  timeline: string;
  minimap: string;
  goldBars: string;
  magnifier: string;
}

export type ScriptStep =
  | { op: 'select_event'; eventId: string | null }
  | { op: 'click_glyph'; recordId: string }
  | { op: 'brush_lane'; slot: number; t0: number; t1: number }
  | { op: 'seek'; t: number }
  | { op: 'toggle_show_all' };

export class App {
  readonly store = new ViewStore();
  private frames: FramePayload[] = [];
  private events: PriorityEventJson[] = [];
  private records: RecordJson[] = [];
  private attributions: AttributionSeriesJson[] = [];
  private inconsistencies: InconsistenciesResponse | null = null;
  private scale: TimeScale = timeScale(0, 1, 800);
  private readonly width: number;

  constructor(private readonly api: ApiClient, width = 800) {
    this.width = width;
  }

  async load(matchId: string): Promise<void> {
    const gen = this.store.selectMatch(matchId);
    const [summary, frames, events, incon, attr] = await Promise.all([
      this.api.summary(matchId),
      this.api.frames(matchId),
      this.api.events(matchId),
      this.api.inconsistencies(matchId),
      this.api.attribution(matchId),
    ]);
    if (!this.store.isCurrent(gen)) return; // superseded while in flight
    this.store.setTimeline(summary.t_start, summary.t_end);
    this.scale = timeScale(summary.t_start, summary.t_end, this.width);
    this.frames = frames.frames;
    this.events = events.events;
    this.records = incon.records;
    this.attributions = attr.series;
    this.inconsistencies = incon;
  }

  /** Re-fetch impacts for the chosen event. The record set is untouched;
   * only glyph radii change on the next render. */
  async selectEvent(eventId: string | null): Promise<void> {
    const gen = this.store.selectEvent(eventId);
    const incon = await this.api.inconsistencies(
      this.store.current.matchId ?? '',
      eventId ?? undefined,
    );
    if (!this.store.isCurrent(gen)) return;
    this.inconsistencies = incon;
  }

  /** Seek the replay to the record's start; the minimap then shows both the
   * predicted and the observed coordinates. */
  clickGlyph(recordId: string): void {
    const record = this.records.find((r) => r.id === recordId);
    if (!record) return;
    this.store.selectRecord(recordId, record.t_start);
  }

  brushLane(slot: number, t0: number, t1: number): void {
    this.store.brushLane(slot, t0, t1);
  }

  tooltip(recordId: string): string {
    const record = this.records.find((r) => r.id === recordId);
    return record ? renderTooltip(record) : '';
  }

  private frameAt(t: number): FramePayload | null {
    let best: FramePayload | null = null;
    for (const f of this.frames) {
      if (f.t <= t && (best === null || f.t > best.t)) best = f;
    }
    return best ?? (this.frames.length ? this.frames[0] : null);
  }

  private magnifierFrames() {
    const brush = this.store.current.brush;
    if (!brush) return [];
    const series = this.attributions.filter((s) => s.slot === brush.slot);
    return series.flatMap((s) => brushFrames(s, brush.t0, brush.t1));
  }

  render(): Snapshot {
    const state = this.store.current;
    const glyphs = layoutGlyphs(this.records, this.inconsistencies?.impacts ?? null, this.scale, {
      showAll: state.showAllGlyphs,
    });
    const frame = this.frameAt(state.playbackTime);
    const selected = this.records.find((r) => r.id === state.selectedRecordId) ?? null;
    return {
      timeline: renderTimeline(glyphs, this.events, this.scale, state.eventId),
      minimap: frame ? renderMinimap(frame, selected) : '<svg class="minimap"></svg>',
      goldBars: frame ? renderGoldBars(frame) : '<svg class="gold-bars"></svg>',
      magnifier: renderMagnifier(this.magnifierFrames()),
    };
  }

  /** Replay a scripted interaction sequence, snapshotting after each step.
   * Deterministic: the same script over the same workspace produces the same
   * snapshots. */
  async runScript(steps: ScriptStep[]): Promise<Snapshot[]> {
    const out: Snapshot[] = [];
    for (const step of steps) {
      switch (step.op) {
        case 'select_event':
          await this.selectEvent(step.eventId);
          break;
        case 'click_glyph':
          this.clickGlyph(step.recordId);
          break;
        case 'brush_lane':
          this.brushLane(step.slot, step.t0, step.t1);
          break;
        case 'seek':
          this.store.seek(step.t);
          break;
        case 'toggle_show_all':
          this.store.toggleShowAll();
          break;
      }
      out.push(this.render());
    }
    return out;
  }
}
