// Thin typed wrappers over the demo service's JSON API. All state ordering
// (sequential before summary) is enforced server-side per X-Session-Id;
// the client only has to carry the header consistently.

export type Patient = { id: number; label: string; hadm_id: number };

export type TimelineEvent = { ts: string; kind: string; text: string };

export type SequentialRecord = {
  subject_id: number;
  hadm_id: number;
  header: string;
  events: TimelineEvent[];
  input_table: string;
  input_text: string;
  input_both: string;
  instruction: string;
  reference: string;
};

export type SummaryResponse = { patient_id: number; hadm_id: number; summary: string };

export type ScoreTriple = { precision: number; recall: number; f1: number };

export type EvalReport = {
  pair_id: string;
  rouge1: ScoreTriple;
  rouge2: ScoreTriple;
  rougeL: ScoreTriple;
  bleu: number;
  meteor: number;
  mmlu: number | null;
  perplexity: number | null;
  embed: ScoreTriple | null;
};

export class ApiError extends Error {
  // status 0 means the service itself was unreachable
  constructor(message: string, readonly status: number) {
    super(message);
    this.name = 'ApiError';
  }
}

let base = '';

/** Point the client at another origin (tests); '' keeps same-origin paths. */
export function setApiBase(url: string): void {
  base = url.replace(/\/+$/, '');
}

const freshId = () =>
  's-' + Math.random().toString(36).slice(2) + '-' + Date.now().toString(36);

let sessionId = freshId();

/** Start a new server-side session (clears the sequential-before-summary gate). */
export function newSession(): string {
  sessionId = freshId();
  return sessionId;
}

async function request<T>(route: string, init: RequestInit = {}): Promise<T> {
  let res: Response;
  try {
    res = await fetch(base + route, {
      ...init,
      headers: {
        'X-Session-Id': sessionId,
        ...(init.body ? { 'Content-Type': 'application/json' } : {}),
      },
    });
  } catch (err) {
    throw new ApiError(`service unreachable: ${String(err)}`, 0);
  }
  if (!res.ok) {
    let detail = `HTTP ${res.status}`;
    try {
      const body = await res.json();
      if (body && typeof body.detail === 'string') detail = body.detail;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(detail, res.status);
  }
  return res.json() as Promise<T>;
}

export async function fetchPatients(): Promise<Patient[]> {
  const body = await request<{ patients: Patient[] }>('/api/patients');
  return body.patients;
}

export function buildSequential(patientId: number): Promise<SequentialRecord> {
  return request(`/api/patients/${patientId}/sequential`, { method: 'POST' });
}

export function generateSummary(patientId: number): Promise<SummaryResponse> {
  return request(`/api/patients/${patientId}/summary`, { method: 'POST' });
}

export function evaluate(
  reference: string,
  hypothesis: string,
  pairId = 'ui',
): Promise<EvalReport> {
  return request('/api/evaluate', {
    method: 'POST',
    body: JSON.stringify({
      reference,
      hypothesis,
      lexical_only: true,
      pair_id: pairId,
    }),
  });
}
