import type { EvalReport, Patient, SequentialRecord } from './api';

// Reachable UI states; 'error' is sticky until the retry action clears it.
export type Phase =
  | 'empty'
  | 'patient-selected'
  | 'sequential-ready'
  | 'summary-ready'
  | 'error';

export type Busy = 'patients' | 'sequential' | 'summary' | 'evaluate' | null;

export interface UiState {
  patients: Patient[];
  selectedId: number | null;
  sequential: SequentialRecord | null;
  summary: string | null;
  evaluation: EvalReport | null;
  busy: Busy;
  error: string;
}

const initial = (): UiState => ({
  patients: [],
  selectedId: null,
  sequential: null,
  summary: null,
  evaluation: null,
  busy: null,
  error: '',
});

/** Derive the state-machine phase; keeps the states mutually exclusive. */
export function phaseOf(s: UiState): Phase {
  if (s.error) return 'error';
  if (s.summary !== null) return 'summary-ready';
  if (s.sequential !== null) return 'sequential-ready';
  if (s.selectedId !== null) return 'patient-selected';
  return 'empty';
}

export class Store {
  private state = initial();
  private listeners = new Set<() => void>();

  get(): UiState {
    return this.state;
  }

  set(patch: Partial<UiState>): void {
    const next = { ...this.state, ...patch };
    // a summary can never outlive the sequential record it came from
    if (next.summary !== null && next.sequential === null) {
      throw new Error('invalid state: summary without sequential dataset');
    }
    this.state = next;
    this.listeners.forEach((fn) => fn());
  }

  /** Selecting a patient (or re-selecting) clears every generated panel. */
  selectPatient(id: number | null): void {
    this.set({
      selectedId: id,
      sequential: null,
      summary: null,
      evaluation: null,
      error: '',
      busy: null,
    });
  }

  subscribe(fn: () => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }
}
