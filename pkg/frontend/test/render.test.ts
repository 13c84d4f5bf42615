import { describe, expect, it } from 'vitest';

import { layoutGlyphs, timeScale } from '../src/layout';
import {
  renderGoldBars,
  renderHeatmap,
  renderMagnifier,
  renderMinimap,
  renderRadar,
  renderTimeline,
  renderTooltip,
} from '../src/render';
import { attributions, events, frames, impactsByEvent, records } from './fixtures';

function count(svg: string, needle: string): number {
  return svg.split(needle).length - 1;
}

describe('renderTimeline', () => {
  const scale = timeScale(0, 600, 800);

  it('draws one glyph per visible record and one marker per event', () => {
    const glyphs = layoutGlyphs(records, impactsByEvent['baron@590'], scale);
    const svg = renderTimeline(glyphs, events, scale, 'baron@590');
    expect(count(svg, 'class="glyph"')).toBe(records.length);
    expect(count(svg, 'data-event-id=')).toBe(events.length);
    expect(count(svg, 'class="event selected"')).toBe(1);
  });
});

describe('renderMagnifier', () => {
  it('renders four signed bars per frame, split by the zero line', () => {
    const svg = renderMagnifier(attributions[1].frames);
    expect(count(svg, 'class="attr-frame"')).toBe(5);
    expect(count(svg, 'class="bar')).toBe(20);
    // blood and gold are negative, coordinates and behavior positive
    expect(count(svg, 'bar blood neg')).toBe(5);
    expect(count(svg, 'bar gold neg')).toBe(5);
    expect(count(svg, 'bar coordinates pos')).toBe(5);
    expect(count(svg, 'bar behavior pos')).toBe(5);
  });

  it('renders a log gap as a gap marker, not zero bars', () => {
    const svg = renderMagnifier(attributions[0].frames);
    expect(count(svg, 'class="gap"')).toBe(1);
    expect(count(svg, 'class="attr-frame"')).toBe(4);
  });

  it('empty selection renders only the zero line', () => {
    const svg = renderMagnifier([]);
    expect(count(svg, 'class="attr-frame"')).toBe(0);
    expect(count(svg, 'class="zero"')).toBe(1);
  });
});

describe('renderMinimap', () => {
  it('draws all ten champions', () => {
    const svg = renderMinimap(frames[0], null);
    expect(count(svg, 'class="champ')).toBe(10);
    expect(count(svg, 'class="predicted"')).toBe(0);
  });

  it('shows predicted and observed coordinates for a selected record', () => {
    const svg = renderMinimap(frames[2], records[1]);
    expect(count(svg, 'class="predicted"')).toBe(1);
    expect(count(svg, 'class="observed"')).toBe(1);
    expect(count(svg, 'class="discrepancy"')).toBe(1);
  });
});

describe('renderGoldBars', () => {
  it('one bar per role with sign-based coloring', () => {
    const svg = renderGoldBars(frames[1]);
    expect(count(svg, 'class="gold-row"')).toBe(5);
  });
});

describe('renderTooltip', () => {
  it('shows the observed behavior and the top-3 probabilities', () => {
    const html = renderTooltip(records[1]);
    expect(html).toContain('observed Inaction');
    expect(html).toContain('Champion: 0.97');
    expect(count(html, '<li>')).toBe(3);
  });
});

describe('renderRadar', () => {
  it('one spoke per axis and a closed polygon', () => {
    const svg = renderRadar({ a: 1, b: 0.5, c: 0.25 });
    expect(count(svg, 'class="spoke"')).toBe(3);
    expect(count(svg, '<polygon')).toBe(1);
  });
});

describe('renderHeatmap', () => {
  it('renders only nonzero cells, scaled to the max count', () => {
    const counts = [
      [0, 3],
      [1, 0],
    ];
    const svg = renderHeatmap(counts, 2);
    expect(count(svg, '<rect')).toBe(2);
    expect(svg).toContain('opacity="1.000"');
  });
});
