// Typed client for the audit engine's HTTP API. This is the workbench's only
// data source: no view computes scores, bands, triage, or metrics locally.

import type {
  CitationDetail,
  CitationsPage,
  DiagnosticsSummary,
  DocumentList,
  DocumentStatus,
  ErrorBody,
  HealthInfo,
  IngestReceipt,
  MetricsRow,
  OverrideDecision,
  OverrideList,
  OverrideRecord,
  ProcessReceipt,
  SweepResponse,
  TauReceipt,
} from './types.js';

export class ApiError extends Error {
  readonly status: number;
  readonly kind: string;
  readonly detail: string;

  constructor(status: number, kind: string, detail: string) {
    super(`${kind}: ${detail}`);
    this.name = 'ApiError';
    this.status = status;
    this.kind = kind;
    this.detail = detail;
  }
}

export interface CitationsQuery {
  tau?: number;
  offset?: number;
  limit?: number;
}

// Everything a view may ask of the engine. Tests substitute a recording
// implementation; production uses HttpApi.
export interface WorkbenchApi {
  health(): Promise<HealthInfo>;
  listDocuments(): Promise<DocumentList>;
  ingest(payload: unknown): Promise<IngestReceipt>;
  status(manuscriptId: string): Promise<DocumentStatus>;
  process(manuscriptId: string, stages?: string[]): Promise<ProcessReceipt>;
  citations(manuscriptId: string, query?: CitationsQuery): Promise<CitationsPage>;
  citationDetail(manuscriptId: string, refId: string): Promise<CitationDetail>;
  setTau(manuscriptId: string, tau: number): Promise<TauReceipt>;
  listOverrides(manuscriptId: string): Promise<OverrideList>;
  recordOverride(
    manuscriptId: string,
    refId: string,
    decision: OverrideDecision,
    note: string,
  ): Promise<OverrideRecord>;
  evaluate(manuscriptId: string, goldCsv: string, tau?: number): Promise<MetricsRow>;
  sweep(manuscriptId: string, taus: number[]): Promise<SweepResponse>;
  diagnostics(manuscriptId: string, windowYears?: number): Promise<DiagnosticsSummary>;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class HttpApi implements WorkbenchApi {
  private readonly baseUrl: string;
  private readonly fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/+$/, '');
    // Bind so the default works when fetch is the browser global.
    this.fetchFn = fetchFn ?? ((input, init) => fetch(input, init));
  }

  health(): Promise<HealthInfo> {
    return this.request('GET', '/health');
  }

  listDocuments(): Promise<DocumentList> {
    return this.request('GET', '/documents');
  }

  ingest(payload: unknown): Promise<IngestReceipt> {
    return this.request('POST', '/documents', { body: payload });
  }

  status(manuscriptId: string): Promise<DocumentStatus> {
    return this.request('GET', `/documents/${encodeURIComponent(manuscriptId)}/status`);
  }

  process(manuscriptId: string, stages?: string[]): Promise<ProcessReceipt> {
    const query = stages && stages.length > 0 ? { stages: stages.join(',') } : undefined;
    return this.request('POST', `/documents/${encodeURIComponent(manuscriptId)}/process`, { query });
  }

  citations(manuscriptId: string, query?: CitationsQuery): Promise<CitationsPage> {
    const params: Record<string, string> = {};
    if (query?.tau !== undefined) params['tau'] = String(query.tau);
    if (query?.offset !== undefined) params['offset'] = String(query.offset);
    if (query?.limit !== undefined) params['limit'] = String(query.limit);
    return this.request('GET', `/documents/${encodeURIComponent(manuscriptId)}/citations`, {
      query: params,
    });
  }

  citationDetail(manuscriptId: string, refId: string): Promise<CitationDetail> {
    const path = `/documents/${encodeURIComponent(manuscriptId)}/citations/${encodeURIComponent(refId)}`;
    return this.request('GET', path);
  }

  setTau(manuscriptId: string, tau: number): Promise<TauReceipt> {
    return this.request('PUT', `/documents/${encodeURIComponent(manuscriptId)}/tau`, {
      body: { tau },
    });
  }

  listOverrides(manuscriptId: string): Promise<OverrideList> {
    return this.request('GET', `/documents/${encodeURIComponent(manuscriptId)}/overrides`);
  }

  recordOverride(
    manuscriptId: string,
    refId: string,
    decision: OverrideDecision,
    note: string,
  ): Promise<OverrideRecord> {
    return this.request('POST', `/documents/${encodeURIComponent(manuscriptId)}/overrides`, {
      body: { reference_id: refId, decision, note },
    });
  }

  evaluate(manuscriptId: string, goldCsv: string, tau?: number): Promise<MetricsRow> {
    const query = tau !== undefined ? { tau: String(tau) } : undefined;
    return this.request('POST', `/documents/${encodeURIComponent(manuscriptId)}/evaluation`, {
      body: { gold_csv: goldCsv },
      query,
    });
  }

  sweep(manuscriptId: string, taus: number[]): Promise<SweepResponse> {
    return this.request('GET', `/documents/${encodeURIComponent(manuscriptId)}/evaluation/sweep`, {
      query: { taus: taus.join(',') },
    });
  }

  diagnostics(manuscriptId: string, windowYears?: number): Promise<DiagnosticsSummary> {
    const query = windowYears !== undefined ? { window_years: String(windowYears) } : undefined;
    return this.request('GET', `/documents/${encodeURIComponent(manuscriptId)}/diagnostics`, {
      query,
    });
  }

  private async request<T>(
    method: string,
    path: string,
    options?: { query?: Record<string, string>; body?: unknown },
  ): Promise<T> {
    let url = this.baseUrl + path;
    if (options?.query && Object.keys(options.query).length > 0) {
      url += '?' + new URLSearchParams(options.query).toString();
    }
    const init: RequestInit = { method };
    if (options?.body !== undefined) {
      init.headers = { 'Content-Type': 'application/json' };
      init.body = JSON.stringify(options.body);
    }
    const response = await this.fetchFn(url, init);
    if (!response.ok) {
      throw await toApiError(response);
    }
    return (await response.json()) as T;
  }
}

async function toApiError(response: Response): Promise<ApiError> {
  let kind = 'HttpError';
  let detail = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as Partial<ErrorBody>;
    if (typeof body.error === 'string') kind = body.error;
    if (typeof body.detail === 'string') detail = body.detail;
  } catch {
    // Non-JSON error body; keep the generic message.
  }
  return new ApiError(response.status, kind, detail);
}
