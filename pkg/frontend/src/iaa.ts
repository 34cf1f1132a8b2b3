/** Formatting for the live agreement panel. */

import type { IaaReport } from "./types.js";

export function formatPercent(ratio: number, decimals = 1): string {
  return `${(100 * ratio).toFixed(decimals)}%`;
}

export interface IaaView {
  headline: string;
  acceptance: string;
  pairwiseF1: string;
  rows: { type: string; aCount: number; bCount: number; agreed: number }[];
}

export function iaaView(report: IaaReport): IaaView {
  const rows = Object.entries(report.per_type)
    .map(([type, row]) => ({
      type,
      aCount: row.a_count,
      bCount: row.b_count,
      agreed: row.agreed,
    }))
    .sort((a, b) => (a.type < b.type ? -1 : 1));
  return {
    headline:
      `${report.pair[0]} vs ${report.pair[1]}: ` +
      `${report.accepted} of ${report.total_max} annotations accepted`,
    acceptance: formatPercent(report.acceptance_rate),
    pairwiseF1: formatPercent(report.pairwise_f1),
    rows,
  };
}
