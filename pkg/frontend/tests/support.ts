// Helpers shared by the workbench tests: pulling rendered facts back out of
// HTML strings and building the set of figures a recorded response can
// account for.

import { escapeHtml, formatMetric } from '../src/format.js';
import type { CitationsPage } from '../src/types.js';

export function flaggedRefsFromTable(html: string): string[] {
  const refs: string[] = [];
  const pattern = /<tr class="triage-row row-flagged" data-ref="([^"]+)"/g;
  let match: RegExpExecArray | null;
  while ((match = pattern.exec(html)) !== null) {
    refs.push(match[1] as string);
  }
  return refs.sort();
}

export function allRefsFromTable(html: string): string[] {
  const refs: string[] = [];
  const pattern = /<tr class="triage-row[^"]*" data-ref="([^"]+)"/g;
  let match: RegExpExecArray | null;
  while ((match = pattern.exec(html)) !== null) {
    refs.push(match[1] as string);
  }
  return refs;
}

// Every rendering a response number can legitimately take on screen: the
// plain JSON form (scores, counts, thresholds) and the fixed three-decimal
// metric form.
export function collectNumbers(value: unknown, out: Set<string>): void {
  if (typeof value === 'number') {
    out.add(String(value));
    if (Number.isFinite(value)) out.add(formatMetric(value));
    return;
  }
  if (Array.isArray(value)) {
    for (const item of value) collectNumbers(item, out);
    return;
  }
  if (value !== null && typeof value === 'object') {
    for (const item of Object.values(value)) collectNumbers(item, out);
  }
}

export function collectStrings(value: unknown, out: string[]): void {
  if (typeof value === 'string') {
    out.push(value);
    return;
  }
  if (Array.isArray(value)) {
    for (const item of value) collectStrings(item, out);
    return;
  }
  if (value !== null && typeof value === 'object') {
    for (const item of Object.values(value)) collectStrings(item, out);
  }
}

// Headline counts are sizes of row subsets of a returned page; enumerate the
// subsets a view is allowed to count.
export function subsetCounts(page: CitationsPage, out: Set<string>): void {
  const entries = page.entries;
  out.add(String(entries.filter((entry) => entry.flagged_at_tau === true).length));
  out.add(String(entries.filter((entry) => entry.flagged_at_tau === false).length));
  out.add(String(entries.filter((entry) => entry.flagged_at_tau === null).length));
  for (const band of ['Relevant', 'Borderline', 'Irrelevant']) {
    out.add(String(entries.filter((entry) => entry.band === band).length));
  }
}

export function isCitationsPage(value: unknown): value is CitationsPage {
  return (
    value !== null &&
    typeof value === 'object' &&
    'entries' in value &&
    'total' in value &&
    Array.isArray((value as CitationsPage).entries)
  );
}

// Numeric tokens that remain in the rendered text once markup and verbatim
// response strings are taken out. What is left must be figures.
export function numericTokens(html: string, responseStrings: string[]): string[] {
  let text = html.replace(/<[^>]*>/g, ' ');
  const unique = Array.from(new Set(responseStrings.filter((s) => s.length > 0)));
  unique.sort((a, b) => b.length - a.length);
  for (const raw of unique) {
    text = text.split(escapeHtml(raw)).join(' ');
  }
  text = text.replace(/&#\d+;|&[a-zA-Z]+;/g, ' ');
  return text.match(/(?<![A-Za-z_])\d+(?:\.\d+)?/g) ?? [];
}
