// Wire shapes returned by the audit engine's HTTP API. Field names and
// nesting mirror the JSON exactly; the workbench never reshapes them.

export type Band = 'Relevant' | 'Borderline' | 'Irrelevant';

export type StageName = 'parse' | 'enrich' | 'score' | 'integrity' | 'report';

export type StageStatus = 'pending' | 'running' | 'done' | 'failed';

export type OverrideDecision = 'accept-flag' | 'dismiss-flag';

export interface HealthInfo {
  status: string;
  engine_version: string;
  stub_mode: boolean;
}

export interface StageInfo {
  status: StageStatus;
  message: string | null;
  started_at: number | null;
  finished_at: number | null;
}

export interface DocumentStatus {
  manuscript_id: string;
  title: string;
  reference_count: number;
  tau: number;
  stages: Record<StageName, StageInfo>;
}

export interface DocumentList {
  documents: DocumentStatus[];
}

export interface IngestReceipt {
  manuscript_id: string;
}

export interface ProcessReceipt {
  manuscript_id: string;
  stages: Record<string, string>;
}

export interface TauReceipt {
  manuscript_id: string;
  tau: number;
}

export interface ConsistencyInfo {
  status: string;
  title_similarity: number | null;
  year_delta: number | null;
  reasons: string[];
}

export interface EntryExtensions {
  notices: string[];
  evidence: string | null;
  occurrences: number;
  consistency: ConsistencyInfo | null;
}

export interface CitationEntry {
  manuscript_id: string;
  reference_id: string;
  RS_final: number | null;
  RS_llm: number | null;
  RS_embed: number | null;
  band: Band | null;
  flagged_at_tau: boolean | null;
  tau: number;
  intent: string | null;
  rationale: string | null;
  flags: string[];
  self_cite: boolean;
  extensions: EntryExtensions;
}

export interface CitationsPage {
  manuscript_id: string;
  tau: number;
  total: number;
  offset: number;
  limit: number;
  entries: CitationEntry[];
}

export interface AssessmentDetail {
  reference_id: string;
  rs_llm: number | null;
  rs_embed: number | null;
  rs_final: number | null;
  band: Band | null;
  flagged_at_tau: boolean | null;
  tau: number;
  intent: string | null;
  evidence: string | null;
  rationale: string | null;
  self_cite: boolean;
  flags: string[];
  notices: string[];
}

export interface ContextWindow {
  ref_id: string;
  occurrence_ordinal: number;
  target_index: number;
  window_text: string;
}

export interface EnrichmentDetail {
  ref_id: string;
  source: string | null;
  title: string | null;
  year: number | null;
  doi: string | null;
  abstract: string | null;
  abstract_source_tier: number | null;
  authors: string[];
  venue: string | null;
  is_retracted: boolean;
  consistency: ConsistencyInfo | null;
  failure_reasons: string[];
}

export interface SelfCitationDetail {
  ref_id: string;
  author_pairs: [string, string, number][];
  team_overlap: boolean;
  venue_overlap: boolean;
  questionable: boolean;
}

export interface OverrideRecord {
  id: number;
  reference_id: string;
  decision: OverrideDecision;
  note: string;
  created_at: number;
}

export interface OverrideList {
  overrides: OverrideRecord[];
}

export interface CitationDetail {
  manuscript_id: string;
  assessment: AssessmentDetail;
  contexts: ContextWindow[];
  enrichment: EnrichmentDetail | null;
  self_citation: SelfCitationDetail | null;
  overrides: OverrideRecord[];
}

export interface ConfusionCells {
  tp_flagged: number;
  fp_flagged: number;
  fn_flagged: number;
  tn_clean: number;
}

export interface MetricsRow {
  tau: number;
  matrix: ConfusionCells;
  accuracy: number;
  precision_flagged: number;
  recall_flagged: number;
  f1_flagged: number;
  precision_clean: number;
  recall_clean: number;
  f1_clean: number;
  macro_f1: number;
  weighted_f1: number;
  kappa: number;
  notices: string[];
}

export interface SweepResponse {
  rows: MetricsRow[];
}

export interface RecencyProfile {
  reference_year: number;
  window_years: number;
  in_window: number;
  dated: number;
  undated: number;
  fraction_in_window: number;
  histogram: Record<string, number>;
}

export interface ConcentrationProfile {
  venue_counts: Record<string, number>;
  venue_index: number;
  unknown_venue: number;
  author_counts: Record<string, number>;
  author_index: number;
}

export interface NetworkNode {
  id: string;
  kind: string;
}

export interface NetworkEdge {
  source: string;
  target: string;
  kind: string;
}

export interface NetworkProfile {
  nodes: NetworkNode[];
  edges: NetworkEdge[];
}

export interface DiagnosticsSummary {
  manuscript_id: string;
  recency: RecencyProfile;
  concentration: ConcentrationProfile;
  network: NetworkProfile;
}

export interface ErrorBody {
  error: string;
  detail: string;
}
