// HTML renderers. Pure functions from API payloads to markup so tests can
// inspect exactly what the analyst would see. Numbers pass through the
// format helpers and are otherwise untouched.

import { escapeHtml, formatCount, formatMetric, formatScore, formatTau } from './format.js';
import type { SessionViewState, SortKey } from './state.js';
import type {
  Band,
  CitationDetail,
  CitationEntry,
  CitationsPage,
  DocumentStatus,
  MetricsRow,
  StageName,
  SweepResponse,
} from './types.js';

const STAGE_ORDER: StageName[] = ['parse', 'enrich', 'score', 'integrity', 'report'];

const BANDS: Band[] = ['Relevant', 'Borderline', 'Irrelevant'];

const TABLE_COLUMNS: { key: SortKey; label: string }[] = [
  { key: 'reference_id', label: 'Reference' },
  { key: 'RS_final', label: 'Fused' },
  { key: 'RS_llm', label: 'Judgment' },
  { key: 'RS_embed', label: 'Embedding' },
  { key: 'band', label: 'Band' },
  { key: 'flagged_at_tau', label: 'Flagged' },
];

const DEGRADED_PREFIXES = ['DEGRADED_SIGNAL:', 'UNSCORABLE:'];

export function renderStaleBanner(notice: string): string {
  return `<div class="banner banner-stale" role="alert">Results are stale: ${escapeHtml(notice)}</div>`;
}

export function renderNotFound(manuscriptId: string): string {
  return (
    '<div class="not-found">' +
    `<h2>Document not found</h2>` +
    `<p>No manuscript with id <code>${escapeHtml(manuscriptId)}</code> is known to the engine.</p>` +
    '</div>'
  );
}

export function renderErrorNote(message: string): string {
  return `<div class="banner banner-error" role="alert">${escapeHtml(message)}</div>`;
}

export function renderStageMonitor(status: DocumentStatus): string {
  const chips = STAGE_ORDER.map((stage) => {
    const info = status.stages[stage];
    const message = info.message ? ` title="${escapeHtml(info.message)}"` : '';
    return `<span class="stage stage-${info.status}"${message}>${stage}: ${info.status}</span>`;
  });
  return (
    '<div class="stage-monitor">' +
    `<span class="doc-title">${escapeHtml(status.title)}</span> ` +
    chips.join(' ') +
    '</div>'
  );
}

// Headline counts are a consistency readout over the rows the engine just
// returned for the current threshold: total comes verbatim from the page and
// each count is the size of a subset of its entries.
export function renderOverview(page: CitationsPage): string {
  const flagged = page.entries.filter((entry) => entry.flagged_at_tau === true).length;
  const clean = page.entries.filter((entry) => entry.flagged_at_tau === false).length;
  const unscored = page.entries.filter((entry) => entry.flagged_at_tau === null).length;
  const bandCounts = BANDS.map((band) => {
    const count = page.entries.filter((entry) => entry.band === band).length;
    return `<span class="band-count band-${band.toLowerCase()}">${band}: ${formatCount(count)}</span>`;
  });
  const unscoredNote =
    unscored > 0 ? ` <span class="headline-unscored">unscored ${formatCount(unscored)}</span>` : '';
  return (
    '<div class="overview">' +
    `<span class="headline-tau">&tau; ${formatTau(page.tau)}</span> ` +
    `<span class="headline-total">references ${formatCount(page.total)}</span> ` +
    `<span class="headline-flagged">flagged ${formatCount(flagged)}</span> ` +
    `<span class="headline-clean">clean ${formatCount(clean)}</span>` +
    unscoredNote +
    ' <span class="headline-bands">' +
    bandCounts.join(' ') +
    '</span></div>'
  );
}

export function renderTriageTable(entries: CitationEntry[], state: SessionViewState): string {
  const headers = TABLE_COLUMNS.map((column) => {
    const marker =
      state.sortKey === column.key ? (state.sortDirection === 'asc' ? ' &#9650;' : ' &#9660;') : '';
    return `<th data-sort="${column.key}">${column.label}${marker}</th>`;
  });
  const rows = entries.map((entry) => renderTriageRow(entry));
  const body =
    rows.length > 0
      ? rows.join('')
      : '<tr><td colspan="8" class="empty">no rows match the current filter</td></tr>';
  return (
    '<table class="triage">' +
    `<thead><tr>${headers.join('')}<th>Flags</th><th>Intent</th></tr></thead>` +
    `<tbody>${body}</tbody>` +
    '</table>'
  );
}

function renderTriageRow(entry: CitationEntry): string {
  const flaggedClass = entry.flagged_at_tau === true ? ' row-flagged' : '';
  const flaggedText = entry.flagged_at_tau === null ? 'n/a' : entry.flagged_at_tau ? 'yes' : 'no';
  const flags = entry.flags.map((flag) => `<span class="flag">${escapeHtml(flag)}</span>`).join(' ');
  const selfCite = entry.self_cite ? ' <span class="self-cite">self-cite</span>' : '';
  return (
    `<tr class="triage-row${flaggedClass}" data-ref="${escapeHtml(entry.reference_id)}">` +
    `<td>${escapeHtml(entry.reference_id)}</td>` +
    `<td class="num">${formatScore(entry.RS_final)}</td>` +
    `<td class="num">${formatScore(entry.RS_llm)}</td>` +
    `<td class="num">${formatScore(entry.RS_embed)}</td>` +
    `<td>${entry.band === null ? 'n/a' : entry.band}</td>` +
    `<td>${flaggedText}</td>` +
    `<td>${flags}${selfCite}</td>` +
    `<td>${entry.intent === null ? '' : escapeHtml(entry.intent)}</td>` +
    '</tr>'
  );
}

export function renderDetail(detail: CitationDetail): string {
  const assessment = detail.assessment;
  const degraded = assessment.notices.some((notice) =>
    DEGRADED_PREFIXES.some((prefix) => notice.startsWith(prefix)),
  );
  const badge = degraded ? ' <span class="badge badge-degraded">degraded signal</span>' : '';
  const flags = assessment.flags.map((flag) => `<span class="flag">${escapeHtml(flag)}</span>`).join(' ');

  const contexts = detail.contexts
    .map(
      (context) =>
        `<blockquote class="context" data-ordinal="${formatCount(context.occurrence_ordinal)}">` +
        escapeHtml(context.window_text) +
        '</blockquote>',
    )
    .join('');

  const parts: string[] = [];
  parts.push(`<h3>${escapeHtml(assessment.reference_id)}${badge}</h3>`);
  parts.push(
    '<dl class="signals">' +
      `<dt>Judgment signal</dt><dd>${formatScore(assessment.rs_llm)}</dd>` +
      `<dt>Embedding signal</dt><dd>${formatScore(assessment.rs_embed)}</dd>` +
      `<dt>Fused score</dt><dd class="fused">${formatScore(assessment.rs_final)}</dd>` +
      `<dt>Band</dt><dd>${assessment.band === null ? 'n/a' : assessment.band}</dd>` +
      `<dt>Flagged at &tau; ${formatTau(assessment.tau)}</dt>` +
      `<dd>${assessment.flagged_at_tau === null ? 'n/a' : assessment.flagged_at_tau ? 'yes' : 'no'}</dd>` +
      '</dl>',
  );
  if (flags) parts.push(`<div class="detail-flags">${flags}</div>`);
  if (assessment.intent !== null) {
    parts.push(`<p class="intent">Intent: ${escapeHtml(assessment.intent)}</p>`);
  }
  if (assessment.rationale) {
    parts.push(`<p class="rationale">${escapeHtml(assessment.rationale)}</p>`);
  }
  if (assessment.evidence) {
    parts.push(`<p class="evidence">${escapeHtml(assessment.evidence)}</p>`);
  }
  if (contexts) parts.push(`<div class="contexts"><h4>Cited in</h4>${contexts}</div>`);
  parts.push(renderEnrichment(detail));
  if (assessment.notices.length > 0) {
    const items = assessment.notices.map((notice) => `<li>${escapeHtml(notice)}</li>`).join('');
    parts.push(`<div class="notices"><h4>Notices</h4><ul>${items}</ul></div>`);
  }
  parts.push(renderOverridePanel(detail));
  return `<section class="detail" data-ref="${escapeHtml(assessment.reference_id)}">${parts.join('')}</section>`;
}

function renderEnrichment(detail: CitationDetail): string {
  const enrichment = detail.enrichment;
  if (!enrichment) return '';
  const rows: string[] = [];
  if (enrichment.title !== null) rows.push(`<dt>Title</dt><dd>${escapeHtml(enrichment.title)}</dd>`);
  if (enrichment.year !== null) rows.push(`<dt>Year</dt><dd>${formatCount(enrichment.year)}</dd>`);
  if (enrichment.venue !== null) rows.push(`<dt>Venue</dt><dd>${escapeHtml(enrichment.venue)}</dd>`);
  if (enrichment.doi !== null) rows.push(`<dt>DOI</dt><dd>${escapeHtml(enrichment.doi)}</dd>`);
  if (enrichment.source !== null) rows.push(`<dt>Source</dt><dd>${escapeHtml(enrichment.source)}</dd>`);
  if (enrichment.authors.length > 0) {
    rows.push(`<dt>Authors</dt><dd>${escapeHtml(enrichment.authors.join(', '))}</dd>`);
  }
  // Consistency reasons are engine verdicts; show the exact strings.
  const reasons = enrichment.consistency?.reasons ?? [];
  const reasonItems = reasons.map((reason) => `<li>${escapeHtml(reason)}</li>`).join('');
  const consistencyBlock =
    reasons.length > 0
      ? `<div class="consistency"><h4>Metadata disagreements</h4><ul>${reasonItems}</ul></div>`
      : '';
  return `<div class="enrichment"><h4>Retrieved record</h4><dl>${rows.join('')}</dl>${consistencyBlock}</div>`;
}

function renderOverridePanel(detail: CitationDetail): string {
  const journal = detail.overrides
    .map(
      (override) =>
        `<li class="journal-entry" data-override-id="${formatCount(override.id)}">` +
        `<span class="decision">${escapeHtml(override.decision)}</span> ` +
        `<span class="note">${escapeHtml(override.note)}</span></li>`,
    )
    .join('');
  const journalBlock = journal
    ? `<ul class="journal">${journal}</ul>`
    : '<p class="journal-empty">no overrides recorded</p>';
  return (
    '<div class="overrides">' +
    '<h4>Analyst decision</h4>' +
    '<input type="text" class="override-note" placeholder="note" />' +
    '<button type="button" data-decision="accept-flag">Accept flag</button>' +
    '<button type="button" data-decision="dismiss-flag">Dismiss flag</button>' +
    journalBlock +
    '</div>'
  );
}

export function renderEvaluation(metrics: MetricsRow): string {
  const matrix = metrics.matrix;
  const notices = metrics.notices.map((notice) => `<li>${escapeHtml(notice)}</li>`).join('');
  const noticeBlock = notices ? `<ul class="eval-notices">${notices}</ul>` : '';
  return (
    '<div class="evaluation">' +
    `<h4>Agreement at &tau; ${formatTau(metrics.tau)}</h4>` +
    '<table class="matrix"><thead>' +
    '<tr><th></th><th>gold flagged</th><th>gold clean</th></tr></thead><tbody>' +
    `<tr><th>engine flagged</th><td>${formatCount(matrix.tp_flagged)}</td><td>${formatCount(matrix.fp_flagged)}</td></tr>` +
    `<tr><th>engine clean</th><td>${formatCount(matrix.fn_flagged)}</td><td>${formatCount(matrix.tn_clean)}</td></tr>` +
    '</tbody></table>' +
    '<dl class="metrics">' +
    `<dt>Accuracy</dt><dd>${formatMetric(metrics.accuracy)}</dd>` +
    `<dt>Precision (flagged)</dt><dd>${formatMetric(metrics.precision_flagged)}</dd>` +
    `<dt>Recall (flagged)</dt><dd>${formatMetric(metrics.recall_flagged)}</dd>` +
    `<dt>F1 (flagged)</dt><dd>${formatMetric(metrics.f1_flagged)}</dd>` +
    `<dt>Precision (clean)</dt><dd>${formatMetric(metrics.precision_clean)}</dd>` +
    `<dt>Recall (clean)</dt><dd>${formatMetric(metrics.recall_clean)}</dd>` +
    `<dt>F1 (clean)</dt><dd>${formatMetric(metrics.f1_clean)}</dd>` +
    `<dt>Macro F1</dt><dd>${formatMetric(metrics.macro_f1)}</dd>` +
    `<dt>Weighted F1</dt><dd>${formatMetric(metrics.weighted_f1)}</dd>` +
    `<dt>Kappa</dt><dd class="kappa">${formatMetric(metrics.kappa)}</dd>` +
    '</dl>' +
    noticeBlock +
    '</div>'
  );
}

export function renderEvaluationError(message: string): string {
  return `<div class="eval-error" role="alert">Gold labels rejected: ${escapeHtml(message)}</div>`;
}

// One bar per threshold. Segment widths use the raw confusion counts as
// flex-grow weights, so the browser draws the proportions; the labels are the
// counts themselves.
export function renderSweep(sweep: SweepResponse): string {
  const rows = sweep.rows
    .map((row) => {
      const matrix = row.matrix;
      return (
        `<div class="sweep-row" data-tau="${formatTau(row.tau)}">` +
        `<span class="sweep-tau">&tau; ${formatTau(row.tau)}</span>` +
        '<div class="sweep-bar">' +
        `<span class="seg seg-tp" style="flex-grow:${formatCount(matrix.tp_flagged)}" title="agreed flags: ${formatCount(matrix.tp_flagged)}"></span>` +
        `<span class="seg seg-fp" style="flex-grow:${formatCount(matrix.fp_flagged)}" title="extra flags: ${formatCount(matrix.fp_flagged)}"></span>` +
        `<span class="seg seg-fn" style="flex-grow:${formatCount(matrix.fn_flagged)}" title="missed flags: ${formatCount(matrix.fn_flagged)}"></span>` +
        `<span class="seg seg-tn" style="flex-grow:${formatCount(matrix.tn_clean)}" title="agreed clean: ${formatCount(matrix.tn_clean)}"></span>` +
        '</div>' +
        `<span class="sweep-cells">${formatCount(matrix.tp_flagged)}/${formatCount(matrix.fp_flagged)}/${formatCount(matrix.fn_flagged)}/${formatCount(matrix.tn_clean)}</span>` +
        `<span class="sweep-kappa">&kappa; ${formatMetric(row.kappa)}</span>` +
        '</div>'
      );
    })
    .join('');
  return `<div class="sweep">${rows}</div>`;
}
