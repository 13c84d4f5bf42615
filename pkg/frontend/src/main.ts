// Browser entry point: boots the review client against the service API and
// delegates clicks/brushes from the rendered SVG back to the controller.

import { ApiClient } from './api';
import { App } from './app';

function mount(app: App, root: HTMLElement): void {
  const draw = () => {
    const snap = app.render();
    root.innerHTML =
      `<div class="timeline-pane">${snap.timeline}</div>` +
      `<div class="replay-pane">${snap.minimap}${snap.goldBars}</div>` +
      `<div class="magnifier-pane">${snap.magnifier}</div>`;
  };

  root.addEventListener('click', (ev) => {
    const target = ev.target as Element | null;
    const glyph = target?.closest('[data-record-id]');
    if (glyph) {
      app.clickGlyph(glyph.getAttribute('data-record-id')!);
      draw();
      return;
    }
    const marker = target?.closest('[data-event-id]');
    if (marker) {
      void app.selectEvent(marker.getAttribute('data-event-id')).then(draw);
    }
  });

  draw();
}

export async function boot(baseUrl = ''): Promise<void> {
  const root = document.getElementById('app');
  if (!root) throw new Error('missing #app mount point');
  const api = new ApiClient(baseUrl);
  const app = new App(api);
  const matches = await api.matches();
  const withBundle = matches.find((m) => m.has_bundle);
  if (withBundle) await app.load(withBundle.match_id);
  mount(app, root);
}

if (typeof document !== 'undefined' && document.getElementById('app')) {
  void boot();
}
