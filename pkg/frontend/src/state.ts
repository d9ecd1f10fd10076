// Session controller: holds what the analyst is looking at and talks to the
// API for every figure. Threshold changes always go back to the engine as a
// query parameter; nothing is re-scored or re-triaged in the browser.

import { ApiError, type WorkbenchApi } from './api.js';
import type {
  Band,
  CitationDetail,
  CitationEntry,
  CitationsPage,
  DocumentStatus,
  MetricsRow,
  OverrideDecision,
  SweepResponse,
} from './types.js';

export type SortKey = 'reference_id' | 'RS_final' | 'RS_llm' | 'RS_embed' | 'band' | 'flagged_at_tau';

export type SortDirection = 'asc' | 'desc';

export interface SessionViewState {
  manuscriptId: string | null;
  tau: number;
  sortKey: SortKey;
  sortDirection: SortDirection;
  bandFilter: Band | 'all';
  flaggedOnly: boolean;
  selectedRef: string | null;
  status: DocumentStatus | null;
  page: CitationsPage | null;
  detail: CitationDetail | null;
  metrics: MetricsRow | null;
  sweep: SweepResponse | null;
  evaluationError: string | null;
  staleNotice: string | null;
  notFound: boolean;
  lastError: string | null;
}

const PAGE_LIMIT = 200;

const BAND_ORDER: Record<Band, number> = { Relevant: 0, Borderline: 1, Irrelevant: 2 };

export function initialState(): SessionViewState {
  return {
    manuscriptId: null,
    tau: 17,
    sortKey: 'reference_id',
    sortDirection: 'asc',
    bandFilter: 'all',
    flaggedOnly: false,
    selectedRef: null,
    status: null,
    page: null,
    detail: null,
    metrics: null,
    sweep: null,
    evaluationError: null,
    staleNotice: null,
    notFound: false,
    lastError: null,
  };
}

export class WorkbenchSession {
  readonly api: WorkbenchApi;
  readonly state: SessionViewState;

  constructor(api: WorkbenchApi) {
    this.api = api;
    this.state = initialState();
  }

  async openDocument(manuscriptId: string): Promise<void> {
    this.state.notFound = false;
    this.state.staleNotice = null;
    this.state.lastError = null;
    this.state.detail = null;
    this.state.selectedRef = null;
    try {
      const status = await this.api.status(manuscriptId);
      this.state.manuscriptId = manuscriptId;
      this.state.status = status;
      this.state.tau = status.tau;
      await this.refreshCitations();
    } catch (err) {
      this.absorb(err);
    }
  }

  async refreshStatus(): Promise<void> {
    if (!this.state.manuscriptId) return;
    try {
      this.state.status = await this.api.status(this.state.manuscriptId);
    } catch (err) {
      this.absorb(err);
    }
  }

  // Slider movements land here: the new threshold rides the citations query
  // so the engine recomputes the flagged set; rows are displayed as returned.
  async steerTau(tau: number): Promise<void> {
    this.state.tau = tau;
    await this.refreshCitations();
  }

  async persistTau(): Promise<void> {
    if (!this.state.manuscriptId) return;
    try {
      const receipt = await this.api.setTau(this.state.manuscriptId, this.state.tau);
      this.state.tau = receipt.tau;
      await this.refreshStatus();
    } catch (err) {
      this.absorb(err);
    }
  }

  async refreshCitations(): Promise<void> {
    if (!this.state.manuscriptId) return;
    this.state.staleNotice = null;
    try {
      this.state.page = await this.api.citations(this.state.manuscriptId, {
        tau: this.state.tau,
        offset: 0,
        limit: PAGE_LIMIT,
      });
    } catch (err) {
      this.absorb(err);
    }
  }

  async selectReference(refId: string): Promise<void> {
    if (!this.state.manuscriptId) return;
    try {
      this.state.detail = await this.api.citationDetail(this.state.manuscriptId, refId);
      this.state.selectedRef = refId;
    } catch (err) {
      this.absorb(err);
    }
  }

  async recordOverride(decision: OverrideDecision, note: string): Promise<void> {
    if (!this.state.manuscriptId || !this.state.selectedRef) return;
    try {
      await this.api.recordOverride(this.state.manuscriptId, this.state.selectedRef, decision, note);
      // Reload so the journal shows what the engine stored, not what we sent.
      this.state.detail = await this.api.citationDetail(this.state.manuscriptId, this.state.selectedRef);
    } catch (err) {
      this.absorb(err);
    }
  }

  async uploadGold(goldCsv: string): Promise<void> {
    if (!this.state.manuscriptId) return;
    this.state.evaluationError = null;
    try {
      this.state.metrics = await this.api.evaluate(this.state.manuscriptId, goldCsv, this.state.tau);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.state.evaluationError = err.detail;
        return;
      }
      this.absorb(err);
    }
  }

  async runSweep(taus: number[]): Promise<void> {
    if (!this.state.manuscriptId) return;
    this.state.evaluationError = null;
    try {
      this.state.sweep = await this.api.sweep(this.state.manuscriptId, taus);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.state.evaluationError = err.detail;
        return;
      }
      this.absorb(err);
    }
  }

  setSort(key: SortKey): void {
    if (this.state.sortKey === key) {
      this.state.sortDirection = this.state.sortDirection === 'asc' ? 'desc' : 'asc';
    } else {
      this.state.sortKey = key;
      this.state.sortDirection = 'asc';
    }
  }

  setBandFilter(band: Band | 'all'): void {
    this.state.bandFilter = band;
  }

  setFlaggedOnly(on: boolean): void {
    this.state.flaggedOnly = on;
  }

  // Rows to show: the received entries, reordered and subset only. Values are
  // never recomputed on the way through.
  visibleEntries(): CitationEntry[] {
    const page = this.state.page;
    if (!page) return [];
    let rows = page.entries.slice();
    if (this.state.flaggedOnly) {
      rows = rows.filter((row) => row.flagged_at_tau === true);
    }
    if (this.state.bandFilter !== 'all') {
      rows = rows.filter((row) => row.band === this.state.bandFilter);
    }
    const direction = this.state.sortDirection === 'desc' ? -1 : 1;
    rows.sort((a, b) => compareEntries(a, b, this.state.sortKey, direction));
    return rows;
  }

  private absorb(err: unknown): void {
    if (err instanceof ApiError) {
      if (err.status === 404 && err.kind === 'UnknownManuscriptError') {
        this.state.notFound = true;
        return;
      }
      if (err.status === 409) {
        this.state.staleNotice = err.detail;
        return;
      }
      this.state.lastError = `${err.kind}: ${err.detail}`;
      return;
    }
    this.state.lastError = err instanceof Error ? err.message : String(err);
  }
}

function compareEntries(a: CitationEntry, b: CitationEntry, key: SortKey, direction: number): number {
  if (key === 'reference_id') return direction * a.reference_id.localeCompare(b.reference_id);
  if (key === 'band') {
    if (a.band === null || b.band === null) return nullsLast(a.band, b.band);
    return direction * (BAND_ORDER[a.band] - BAND_ORDER[b.band]);
  }
  if (key === 'flagged_at_tau') {
    if (a.flagged_at_tau === null || b.flagged_at_tau === null) {
      return nullsLast(a.flagged_at_tau, b.flagged_at_tau);
    }
    return direction * (Number(b.flagged_at_tau) - Number(a.flagged_at_tau));
  }
  const left = a[key];
  const right = b[key];
  if (left === null || right === null) return nullsLast(left, right);
  return direction * (left - right);
}

// Unscored rows sink to the bottom in either sort direction.
function nullsLast(left: unknown, right: unknown): number {
  if (left === null && right === null) return 0;
  return left === null ? 1 : -1;
}
