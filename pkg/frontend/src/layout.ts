// Pure layout math for the inconsistency timeline: time scales, glyph radii
// driven by event-normalized impacts, impact-rank visibility capping, and
// brush-to-attribution-frame selection.

import {
  AttributionFrame,
  AttributionSeriesJson,
  ImpactJson,
  RecordJson,
} from './api';

export const MIN_GLYPH_RADIUS = 3;
export const MAX_GLYPH_RADIUS = 12;
export const DEFAULT_GLYPH_CAP = 50;

export interface TimeScale {
  toX(t: number): number;
  tStart: number;
  tEnd: number;
  width: number;
}

export function timeScale(tStart: number, tEnd: number, width: number): TimeScale {
  const span = tEnd - tStart;
  return {
    tStart,
    tEnd,
    width,
    toX: (t) => (span <= 0 ? 0 : ((t - tStart) / span) * width),
  };
}

/** Normalized impact in [0,1] mapped linearly onto the radius range. Records
 * with no impact entry for the selected event (ineligible or no event
 * selected) sit at the minimum radius. */
export function glyphRadius(normalized: number | undefined): number {
  if (normalized === undefined) return MIN_GLYPH_RADIUS;
  const v = Math.min(1, Math.max(0, normalized));
  return MIN_GLYPH_RADIUS + v * (MAX_GLYPH_RADIUS - MIN_GLYPH_RADIUS);
}

export interface GlyphLayout {
  recordId: string;
  slot: number;
  lane: number;
  cx: number;
  r: number;
  impact: number;
  visible: boolean;
}

export function impactByRecord(impacts: ImpactJson[] | null): Map<string, number> {
  const out = new Map<string, number>();
  for (const imp of impacts ?? []) out.set(imp.record_id, imp.normalized);
  return out;
}

/** One glyph per record, lane = champion slot. Changing the selected event
 * changes radii only: the glyph set is a function of the records alone. When
 * more than `cap` glyphs exist, only the top `cap` by impact stay visible
 * unless showAll is set. */
export function layoutGlyphs(
  records: RecordJson[],
  impacts: ImpactJson[] | null,
  scale: TimeScale,
  opts: { cap?: number; showAll?: boolean } = {},
): GlyphLayout[] {
  const cap = opts.cap ?? DEFAULT_GLYPH_CAP;
  const byRecord = impactByRecord(impacts);
  const glyphs = records.map((rec) => ({
    recordId: rec.id,
    slot: rec.slot,
    lane: rec.slot,
    cx: scale.toX(rec.t_start),
    r: glyphRadius(byRecord.get(rec.id)),
    impact: byRecord.get(rec.id) ?? 0,
    visible: true,
  }));
  if (!opts.showAll && glyphs.length > cap) {
    const ranked = [...glyphs].sort((a, b) => b.impact - a.impact);
    const keep = new Set(ranked.slice(0, cap).map((g) => g.recordId));
    for (const g of glyphs) g.visible = keep.has(g.recordId);
  }
  return glyphs;
}

/** Frames inside a closed brush span; a zero-width brush selects nothing. */
export function brushFrames(
  series: AttributionSeriesJson,
  t0: number,
  t1: number,
): AttributionFrame[] {
  if (t1 <= t0) return [];
  return series.frames.filter((f) => t0 <= f.t && f.t <= t1);
}

/** Indices after which the next frame is more than `dt` away; rendered as a
 * visible gap, not as zero-height bars. */
export function frameGaps(frames: AttributionFrame[], dt = 1.0): number[] {
  const gaps: number[] = [];
  for (let i = 0; i + 1 < frames.length; i += 1) {
    if (frames[i + 1].t - frames[i].t > dt + 1e-9) gaps.push(i);
  }
  return gaps;
}
