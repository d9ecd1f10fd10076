// Browser entry point: wires the session controller to a static page. All
// audit semantics live on the server; this file only moves strings between
// DOM nodes and the API client.

import { HttpApi } from './api.js';
import { WorkbenchSession } from './state.js';
import {
  renderDetail,
  renderErrorNote,
  renderEvaluation,
  renderEvaluationError,
  renderNotFound,
  renderOverview,
  renderStageMonitor,
  renderStaleBanner,
  renderSweep,
  renderTriageTable,
} from './render.js';
import type { SortKey } from './state.js';
import type { Band } from './types.js';

const DEFAULT_BASE_URL = 'http://127.0.0.1:8000';
const POLL_INTERVAL_MS = 1000;

const SHELL = `
<header>
  <h1>Citation audit workbench</h1>
  <label>Engine <input id="base-url" type="text" value="${DEFAULT_BASE_URL}" size="28" /></label>
  <button id="connect" type="button">Connect</button>
  <span id="health"></span>
</header>
<section id="banner-area"></section>
<section id="upload-pane">
  <h2>Upload</h2>
  <textarea id="payload" rows="6" placeholder="structured manuscript payload (JSON)"></textarea>
  <pre id="payload-preview" class="payload-preview"></pre>
  <button id="ingest" type="button">Ingest and process</button>
  <div id="documents"></div>
</section>
<section id="status-pane"></section>
<section id="triage-pane">
  <div id="controls">
    <label>&tau; <input id="tau-slider" type="range" min="0" max="100" step="1" value="17" />
      <span id="tau-value">17</span></label>
    <button id="tau-persist" type="button">Persist threshold</button>
    <label><input id="flagged-only" type="checkbox" /> flagged only</label>
    <select id="band-filter">
      <option value="all">all bands</option>
      <option value="Relevant">Relevant</option>
      <option value="Borderline">Borderline</option>
      <option value="Irrelevant">Irrelevant</option>
    </select>
  </div>
  <div id="overview"></div>
  <div id="table"></div>
</section>
<section id="detail-pane"></section>
<section id="evaluation-pane">
  <h2>Evaluation</h2>
  <textarea id="gold" rows="4" placeholder="gold labels CSV: reference_id,label"></textarea>
  <button id="evaluate" type="button">Evaluate</button>
  <label>sweep &tau; list <input id="sweep-taus" type="text" value="10,15,17,20,25" size="18" /></label>
  <button id="run-sweep" type="button">Run sweep</button>
  <div id="evaluation"></div>
  <div id="sweep"></div>
</section>
`;

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function main(): void {
  const app = byId<HTMLDivElement>('app');
  app.innerHTML = SHELL;

  let session = new WorkbenchSession(new HttpApi(DEFAULT_BASE_URL));
  let pollTimer: number | null = null;

  const render = (): void => {
    const state = session.state;
    const banners: string[] = [];
    if (state.staleNotice !== null) banners.push(renderStaleBanner(state.staleNotice));
    if (state.lastError !== null) banners.push(renderErrorNote(state.lastError));
    byId('banner-area').innerHTML = banners.join('');

    if (state.notFound) {
      byId('status-pane').innerHTML = renderNotFound(state.manuscriptId ?? '');
      byId('overview').innerHTML = '';
      byId('table').innerHTML = '';
      return;
    }
    byId('status-pane').innerHTML = state.status ? renderStageMonitor(state.status) : '';
    byId('overview').innerHTML = state.page ? renderOverview(state.page) : '';
    byId('table').innerHTML = state.page
      ? renderTriageTable(session.visibleEntries(), state)
      : '';
    byId('detail-pane').innerHTML = state.detail ? renderDetail(state.detail) : '';

    const evaluation = byId('evaluation');
    if (state.evaluationError !== null) {
      evaluation.innerHTML = renderEvaluationError(state.evaluationError);
    } else {
      evaluation.innerHTML = state.metrics ? renderEvaluation(state.metrics) : '';
    }
    byId('sweep').innerHTML = state.sweep ? renderSweep(state.sweep) : '';

    byId<HTMLSpanElement>('tau-value').textContent = String(state.page?.tau ?? state.tau);
    renderDocuments();
  };

  const renderDocuments = (): void => {
    void session.api
      .listDocuments()
      .then((listing) => {
        const items = listing.documents
          .map(
            (doc) =>
              `<li><a href="#" data-open="${doc.manuscript_id}">${doc.manuscript_id}</a> ${doc.title}</li>`,
          )
          .join('');
        byId('documents').innerHTML = items ? `<ul class="documents">${items}</ul>` : '';
      })
      .catch(() => {
        // Listing is a convenience; connection errors surface elsewhere.
      });
  };

  const stopPolling = (): void => {
    if (pollTimer !== null) {
      window.clearTimeout(pollTimer);
      pollTimer = null;
    }
  };

  const pollUntilDone = (): void => {
    stopPolling();
    const tick = async (): Promise<void> => {
      await session.refreshStatus();
      render();
      const stages = session.state.status?.stages;
      const settled =
        stages !== undefined &&
        Object.values(stages).every((info) => info.status === 'done' || info.status === 'failed');
      if (settled) {
        await session.refreshCitations();
        render();
        return;
      }
      pollTimer = window.setTimeout(() => void tick(), POLL_INTERVAL_MS);
    };
    void tick();
  };

  byId<HTMLButtonElement>('connect').addEventListener('click', () => {
    const baseUrl = byId<HTMLInputElement>('base-url').value.trim() || DEFAULT_BASE_URL;
    session = new WorkbenchSession(new HttpApi(baseUrl));
    void session.api
      .health()
      .then((health) => {
        byId('health').textContent = `engine ${health.engine_version}${health.stub_mode ? ' (stub mode)' : ''}`;
        render();
      })
      .catch((err) => {
        byId('health').textContent = err instanceof Error ? err.message : String(err);
      });
  });

  byId<HTMLTextAreaElement>('payload').addEventListener('input', (event) => {
    // Side-by-side preview of the structured payload being uploaded.
    const raw = (event.target as HTMLTextAreaElement).value;
    const preview = byId<HTMLPreElement>('payload-preview');
    try {
      preview.textContent = JSON.stringify(JSON.parse(raw), null, 2);
    } catch {
      preview.textContent = raw ? 'not valid JSON yet' : '';
    }
  });

  byId<HTMLButtonElement>('ingest').addEventListener('click', () => {
    const raw = byId<HTMLTextAreaElement>('payload').value;
    let payload: unknown;
    try {
      payload = JSON.parse(raw);
    } catch {
      session.state.lastError = 'payload is not valid JSON';
      render();
      return;
    }
    void (async () => {
      try {
        const receipt = await session.api.ingest(payload);
        await session.api.process(receipt.manuscript_id);
        await session.openDocument(receipt.manuscript_id);
        render();
        pollUntilDone();
      } catch (err) {
        session.state.lastError = err instanceof Error ? err.message : String(err);
        render();
      }
    })();
  });

  byId('documents').addEventListener('click', (event) => {
    const target = (event.target as HTMLElement).closest('[data-open]');
    if (!target) return;
    event.preventDefault();
    const manuscriptId = target.getAttribute('data-open');
    if (manuscriptId) {
      void session.openDocument(manuscriptId).then(render);
    }
  });

  const slider = byId<HTMLInputElement>('tau-slider');
  slider.addEventListener('change', () => {
    void session.steerTau(Number(slider.value)).then(render);
  });

  byId<HTMLButtonElement>('tau-persist').addEventListener('click', () => {
    void session.persistTau().then(render);
  });

  byId<HTMLInputElement>('flagged-only').addEventListener('change', (event) => {
    session.setFlaggedOnly((event.target as HTMLInputElement).checked);
    render();
  });

  byId<HTMLSelectElement>('band-filter').addEventListener('change', (event) => {
    session.setBandFilter((event.target as HTMLSelectElement).value as Band | 'all');
    render();
  });

  byId('table').addEventListener('click', (event) => {
    const header = (event.target as HTMLElement).closest('[data-sort]');
    if (header) {
      session.setSort(header.getAttribute('data-sort') as SortKey);
      render();
      return;
    }
    const row = (event.target as HTMLElement).closest('[data-ref]');
    if (row) {
      const refId = row.getAttribute('data-ref');
      if (refId) void session.selectReference(refId).then(render);
    }
  });

  byId('detail-pane').addEventListener('click', (event) => {
    const button = (event.target as HTMLElement).closest('[data-decision]');
    if (!button) return;
    const decision = button.getAttribute('data-decision') as 'accept-flag' | 'dismiss-flag';
    const note = byId<HTMLInputElement>('detail-pane')
      .querySelector<HTMLInputElement>('.override-note')?.value ?? '';
    void session.recordOverride(decision, note).then(render);
  });

  byId<HTMLButtonElement>('evaluate').addEventListener('click', () => {
    const goldCsv = byId<HTMLTextAreaElement>('gold').value;
    void session.uploadGold(goldCsv).then(render);
  });

  byId<HTMLButtonElement>('run-sweep').addEventListener('click', () => {
    const raw = byId<HTMLInputElement>('sweep-taus').value;
    const taus = raw
      .split(',')
      .map((part) => Number(part.trim()))
      .filter((value) => Number.isFinite(value));
    if (taus.length === 0) {
      session.state.evaluationError = 'enter at least one threshold, e.g. 10,17,25';
      render();
      return;
    }
    void session.runSweep(taus).then(render);
  });

  render();
}

main();
