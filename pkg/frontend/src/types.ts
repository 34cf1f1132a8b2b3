/** Wire shapes, mirroring the service's JSON bodies. */

export interface SpanRecord {
  start: number;
  end: number;
  label: string;
  provenance: string;
  score?: number;
}

export interface DocRecord {
  doc_id: string;
  text: string;
  source_url?: string | null;
  sentences: [number, number][];
  paragraphs: [number, number][];
}

export interface TaskResponse {
  done: boolean;
  doc?: DocRecord;
  pre_annotations?: SpanRecord[];
}

export interface SchemaType {
  name: string;
  category: string;
  origin: string;
  description: string;
}

export interface SchemaDoc {
  version: string;
  types: SchemaType[];
  migration: Record<string, string>;
}

export interface IaaTypeRow {
  a_count: number;
  b_count: number;
  agreed: number;
}

export interface IaaReport {
  pair: [string, string];
  count_a: number;
  count_b: number;
  total_max: number;
  accepted: number;
  acceptance_rate: number;
  pairwise_f1: number;
  per_type: Record<string, IaaTypeRow>;
}
