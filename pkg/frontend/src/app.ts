import {
  ApiError,
  buildSequential,
  evaluate,
  fetchPatients,
  generateSummary,
  newSession,
  type EvalReport,
} from './api';
import { phaseOf, Store } from './state';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className = '',
  text = '',
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function panel(key: string, title: string): { root: HTMLElement; body: HTMLElement } {
  const root = el('section', 'panel');
  root.dataset.panel = key;
  root.appendChild(el('h2', '', title));
  const body = el('pre', 'panel-body');
  root.appendChild(body);
  return { root, body };
}

export function render(root: HTMLElement, store = new Store()): Store {
  newSession();
  root.innerHTML = '';

  const header = el('header', 'top');
  header.appendChild(el('h1', '', 'note-forge demo'));
  root.appendChild(header);

  const banner = el('div', 'error-banner');
  banner.hidden = true;
  const bannerText = el('span', 'error-text');
  const retryBtn = el('button', 'retry', 'Retry');
  banner.appendChild(bannerText);
  banner.appendChild(retryBtn);
  root.appendChild(banner);

  const picker = el('nav', 'patient-picker');
  root.appendChild(picker);

  const controls = el('div', 'controls');
  const seqBtn = el('button', 'generate-sequential', 'Generate a sequential dataset');
  const sumBtn = el('button', 'generate-summary', 'Generate a summary');
  const evalBtn = el('button', 'evaluate', 'Evaluate vs reference');
  controls.appendChild(seqBtn);
  controls.appendChild(sumBtn);
  controls.appendChild(evalBtn);
  root.appendChild(controls);

  const panels = el('main', 'panels');
  const patientPanel = panel('patient', 'Patient data');
  const seqPanel = panel('sequential', 'Sequential dataset');
  const sumPanel = panel('summary', 'Summary');
  const evalPanel = panel('evaluation', 'Evaluation');
  for (const p of [patientPanel, seqPanel, sumPanel, evalPanel]) {
    panels.appendChild(p.root);
  }
  root.appendChild(panels);

  // the action to repeat when the user hits Retry on the banner
  let retryAction: () => void = () => void loadPatients();

  function fail(err: unknown, action: () => void): void {
    retryAction = action;
    const message = err instanceof ApiError ? err.message : String(err);
    store.set({ busy: null, error: message });
  }

  async function loadPatients(): Promise<void> {
    store.set({ busy: 'patients', error: '' });
    try {
      const patients = await fetchPatients();
      store.set({ patients, busy: null });
    } catch (err) {
      fail(err, () => void loadPatients());
    }
  }

  async function runSequential(): Promise<void> {
    const { selectedId, busy } = store.get();
    if (selectedId === null || busy) return; // debounce: one in-flight request
    store.set({ busy: 'sequential', error: '' });
    try {
      const record = await buildSequential(selectedId);
      store.set({ sequential: record, summary: null, evaluation: null, busy: null });
    } catch (err) {
      fail(err, () => void runSequential());
    }
  }

  async function runSummary(): Promise<void> {
    const { selectedId, sequential, busy } = store.get();
    if (selectedId === null || sequential === null || busy) return;
    store.set({ busy: 'summary', error: '' });
    try {
      const response = await generateSummary(selectedId);
      store.set({ summary: response.summary, busy: null });
    } catch (err) {
      fail(err, () => void runSummary());
    }
  }

  async function runEvaluate(): Promise<void> {
    const { sequential, summary, busy } = store.get();
    if (sequential === null || summary === null || busy) return;
    store.set({ busy: 'evaluate', error: '' });
    try {
      const report = await evaluate(sequential.reference, summary);
      store.set({ evaluation: report, busy: null });
    } catch (err) {
      fail(err, () => void runEvaluate());
    }
  }

  seqBtn.addEventListener('click', () => void runSequential());
  sumBtn.addEventListener('click', () => void runSummary());
  evalBtn.addEventListener('click', () => void runEvaluate());
  retryBtn.addEventListener('click', () => {
    const action = retryAction;
    action();
  });

  function formatEvaluation(report: EvalReport): string {
    const f = (x: number) => x.toFixed(3);
    return [
      `ROUGE-1 F1  ${f(report.rouge1.f1)}`,
      `ROUGE-2 F1  ${f(report.rouge2.f1)}`,
      `ROUGE-L F1  ${f(report.rougeL.f1)}`,
      `BLEU        ${f(report.bleu)}`,
      `METEOR      ${f(report.meteor)}`,
    ].join('\n');
  }

  function sync(): void {
    const s = store.get();
    const phase = phaseOf(s);
    root.dataset.phase = phase;

    banner.hidden = phase !== 'error';
    bannerText.textContent = s.error;

    picker.innerHTML = '';
    for (const patient of s.patients) {
      const btn = el('button', 'patient', patient.label);
      btn.dataset.id = String(patient.id);
      if (patient.id === s.selectedId) btn.classList.add('active');
      btn.disabled = phase === 'error' || s.busy !== null;
      btn.addEventListener('click', () => store.selectPatient(patient.id));
      picker.appendChild(btn);
    }
    if (s.patients.length === 0 && s.busy === 'patients') {
      picker.appendChild(el('span', 'loading', 'Loading patients...'));
    }

    const blocked = phase === 'error' || s.busy !== null;
    seqBtn.disabled = blocked || s.selectedId === null;
    // button 2 is unreachable until button 1 has succeeded
    sumBtn.disabled = blocked || s.sequential === null;
    evalBtn.disabled = blocked || s.summary === null;

    seqBtn.textContent = s.busy === 'sequential'
      ? 'Generating...' : 'Generate a sequential dataset';
    sumBtn.textContent = s.busy === 'summary'
      ? 'Generating...' : 'Generate a summary';
    evalBtn.textContent = s.busy === 'evaluate'
      ? 'Evaluating...' : 'Evaluate vs reference';

    const selected = s.patients.find((p) => p.id === s.selectedId);
    patientPanel.body.textContent = s.sequential
      ? s.sequential.header
      : selected
        ? selected.label
        : 'Select a patient.';
    seqPanel.body.textContent = s.sequential
      ? s.sequential.input_text
      : s.busy === 'sequential' ? 'Loading...' : '';
    sumPanel.body.textContent = s.summary
      ?? (s.busy === 'summary' ? 'Loading...' : '');
    evalPanel.body.textContent = s.evaluation
      ? formatEvaluation(s.evaluation)
      : s.busy === 'evaluate' ? 'Loading...' : '';
  }

  store.subscribe(sync);
  sync();
  void loadPatients();
  return store;
}
