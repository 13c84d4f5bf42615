// SVG-string renderers. Every renderer is a pure function of its inputs, so
// replaying an interaction script yields byte-identical markup.

import {
  AttributionFrame,
  ChampionFrame,
  FramePayload,
  PriorityEventJson,
  RecordJson,
} from './api';
import { frameGaps, GlyphLayout, TimeScale } from './layout';

export const GROUP_ORDER = ['blood', 'gold', 'coordinates', 'behavior'] as const;

const GROUP_COLORS: Record<string, string> = {
  blood: '#c0392b',
  gold: '#d4a017',
  coordinates: '#2980b9',
  behavior: '#27ae60',
};

const LANE_HEIGHT = 28;

function esc(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toFixed(3);
}

/** Glyph lanes plus event markers. Glyph radii carry the event-normalized
 * impact; ids allow click delegation back to the controller. */
export function renderTimeline(
  glyphs: GlyphLayout[],
  events: PriorityEventJson[],
  scale: TimeScale,
  selectedEventId: string | null,
): string {
  const height = 10 * LANE_HEIGHT + 20;
  const lanes = Array.from({ length: 10 }, (_, lane) => {
    const y = 10 + lane * LANE_HEIGHT;
    return `<line class="lane" x1="0" y1="${y}" x2="${scale.width}" y2="${y}"/>`;
  });
  const markers = events.map((ev) => {
    const x = fmt(scale.toX(ev.t));
    const cls = ev.id === selectedEventId ? 'event selected' : 'event';
    return (
      `<g class="${cls}" data-event-id="${esc(ev.id)}">` +
      `<line x1="${x}" y1="0" x2="${x}" y2="${height}"/>` +
      `<text x="${x}" y="${height - 4}">${esc(ev.kind)}</text></g>`
    );
  });
  const circles = glyphs
    .filter((g) => g.visible)
    .map((g) => {
      const cy = 10 + g.lane * LANE_HEIGHT;
      return (
        `<circle class="glyph" data-record-id="${esc(g.recordId)}" ` +
        `cx="${fmt(g.cx)}" cy="${cy}" r="${fmt(g.r)}"/>`
      );
    });
  return (
    `<svg class="timeline" width="${scale.width}" height="${height}">` +
    lanes.join('') +
    markers.join('') +
    circles.join('') +
    `</svg>`
  );
}

/** Magnifier: one group of four signed bars per selected frame, above or
 * below the zero line by sign. Missing frames leave a gap marker instead of
 * zero bars. */
export function renderMagnifier(frames: AttributionFrame[], width = 300, height = 120): string {
  const zero = height / 2;
  const slotWidth = frames.length ? width / frames.length : width;
  const barWidth = slotWidth / (GROUP_ORDER.length + 1);
  const parts: string[] = [
    `<line class="zero" x1="0" y1="${zero}" x2="${width}" y2="${zero}"/>`,
  ];
  frames.forEach((frame, i) => {
    const bars = GROUP_ORDER.map((group, gi) => {
      const v = frame.values[group] ?? 0;
      const h = Math.abs(v) * (zero - 6);
      const x = fmt(i * slotWidth + gi * barWidth + barWidth / 2);
      const y = v >= 0 ? zero - h : zero;
      return (
        `<rect class="bar ${group} ${v >= 0 ? 'pos' : 'neg'}" ` +
        `fill="${GROUP_COLORS[group]}" x="${x}" y="${fmt(y)}" ` +
        `width="${fmt(barWidth)}" height="${fmt(h)}" data-t="${fmt(frame.t)}"/>`
      );
    });
    parts.push(`<g class="attr-frame" data-t="${fmt(frame.t)}">${bars.join('')}</g>`);
  });
  for (const gi of frameGaps(frames)) {
    const x = fmt((gi + 1) * slotWidth);
    parts.push(`<line class="gap" x1="${x}" y1="0" x2="${x}" y2="${height}"/>`);
  }
  return `<svg class="magnifier" width="${width}" height="${height}">${parts.join('')}</svg>`;
}

/** Minimap at one playback instant. When a record is selected, both its
 * predicted and observed coordinates are drawn so the discrepancy is visible. */
export function renderMinimap(
  frame: FramePayload,
  selected: RecordJson | null,
  size = 200,
): string {
  const dot = (c: ChampionFrame, slot: number) =>
    `<circle class="champ ${c.team.toLowerCase()}" data-slot="${slot}" ` +
    `cx="${fmt(c.global_pos[0] * size)}" cy="${fmt(c.global_pos[1] * size)}" r="4"/>`;
  const parts = frame.champions.map(dot);
  if (selected) {
    const [px, py] = selected.predicted_coords;
    const [ox, oy] = selected.observed_coords;
    parts.push(
      `<circle class="predicted" cx="${fmt(px * size)}" cy="${fmt(py * size)}" r="6"/>`,
      `<path class="observed" d="M${fmt(ox * size - 5)} ${fmt(oy * size - 5)} ` +
        `L${fmt(ox * size + 5)} ${fmt(oy * size + 5)} M${fmt(ox * size - 5)} ` +
        `${fmt(oy * size + 5)} L${fmt(ox * size + 5)} ${fmt(oy * size - 5)}"/>`,
      `<line class="discrepancy" x1="${fmt(px * size)}" y1="${fmt(py * size)}" ` +
        `x2="${fmt(ox * size)}" y2="${fmt(oy * size)}"/>`,
    );
  }
  return `<svg class="minimap" width="${size}" height="${size}">${parts.join('')}</svg>`;
}

/** Per-role gold difference bars, blue perspective. */
export function renderGoldBars(frame: FramePayload, width = 200): string {
  const roles = Object.entries(frame.gold_diff.per_role);
  const maxAbs = Math.max(1, ...roles.map(([, v]) => Math.abs(v)));
  const rows = roles.map(([role, v], i) => {
    const half = width / 2;
    const w = (Math.abs(v) / maxAbs) * half;
    const x = v >= 0 ? half : half - w;
    return (
      `<g class="gold-row" data-role="${esc(role)}">` +
      `<rect class="${v >= 0 ? 'blue' : 'red'}" x="${fmt(x)}" y="${i * 18}" ` +
      `width="${fmt(w)}" height="14"/>` +
      `<text x="0" y="${i * 18 + 11}">${esc(role)} ${v}</text></g>`
    );
  });
  return `<svg class="gold-bars" width="${width}" height="${roles.length * 18}">${rows.join('')}</svg>`;
}

export function renderTooltip(record: RecordJson): string {
  const rows = record.predicted_top3
    .map((p) => `<li>${esc(p.behavior)}: ${p.prob.toFixed(2)}</li>`)
    .join('');
  return (
    `<div class="tooltip" data-record-id="${esc(record.id)}">` +
    `<strong>observed ${esc(record.observed_behavior)}</strong><ul>${rows}</ul></div>`
  );
}

/** Radar polygon over named axes, values already normalized to [0,1]. */
export function renderRadar(values: Record<string, number>, size = 160): string {
  const axes = Object.keys(values);
  const cx = size / 2;
  const r = size / 2 - 10;
  const point = (i: number, v: number): [number, number] => {
    const angle = (2 * Math.PI * i) / axes.length - Math.PI / 2;
    return [cx + Math.cos(angle) * r * v, cx + Math.sin(angle) * r * v];
  };
  const spokes = axes.map((axis, i) => {
    const [x, y] = point(i, 1);
    return `<line class="spoke" data-axis="${esc(axis)}" x1="${cx}" y1="${cx}" x2="${fmt(x)}" y2="${fmt(y)}"/>`;
  });
  const poly = axes
    .map((axis, i) => point(i, values[axis]).map(fmt).join(','))
    .join(' ');
  return (
    `<svg class="radar" width="${size}" height="${size}">` +
    spokes.join('') +
    `<polygon class="shape" points="${poly}"/></svg>`
  );
}

/** Movement heatmap: one cell per nonzero count, opacity scaled to the max. */
export function renderHeatmap(counts: number[][], size = 192): string {
  const grid = counts.length;
  const cell = size / grid;
  const max = Math.max(1, ...counts.map((row) => Math.max(...row)));
  const cells: string[] = [];
  for (let x = 0; x < grid; x += 1) {
    for (let y = 0; y < grid; y += 1) {
      const v = counts[x][y];
      if (v === 0) continue;
      cells.push(
        `<rect x="${fmt(x * cell)}" y="${fmt(y * cell)}" width="${fmt(cell)}" ` +
          `height="${fmt(cell)}" opacity="${(v / max).toFixed(3)}"/>`,
      );
    }
  }
  return `<svg class="heatmap" width="${size}" height="${size}">${cells.join('')}</svg>`;
}
