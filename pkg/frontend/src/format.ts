// Display formatting only. Every figure the workbench shows is a value the
// API returned; these helpers pick a fixed rendering for it and never
// combine, rescale, or otherwise derive numbers.

// Scores arrive already rounded to one decimal, so the plain JSON rendering
// is the verbatim display form. Unscored entries carry null.
export function formatScore(value: number | null): string {
  return value === null ? 'n/a' : String(value);
}

// Evaluation metrics arrive at full precision; show three decimals.
export function formatMetric(value: number): string {
  return value.toFixed(3);
}

export function formatCount(value: number): string {
  return String(value);
}

// Thresholds are numbers like 17 or 17.5; JSON rendering keeps them exact.
export function formatTau(value: number): string {
  return String(value);
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}
