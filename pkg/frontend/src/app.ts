// DOM layer: three panels (Translate / Vocabulary / Song) bound to AppState.
// All displayed values come from the server; this file only renders them.

import { ProcessResult, VocabEntry } from './api.js';
import { MAX_RECORDING_SECONDS, Recorder } from './recorder.js';
import { AppState, ViewState } from './state.js';

const MAX_PROGRESS = 5;

export class App {
    private recorder = new Recorder();
    private audioEl: HTMLAudioElement | null = null;

    constructor(
        private state: AppState,
        private root: HTMLElement,
    ) {}

    mount(): void {
        this.root.innerHTML = `
            <div id="banner" class="banner hidden"></div>
            <main class="panels">
                <section class="panel" id="translate-panel">
                    <h2>Translate</h2>
                    <form id="text-form">
                        <input id="text-input" type="text" placeholder="Type an English sentence" autocomplete="off">
                        <button type="submit" id="submit-btn">Translate</button>
                        <button type="button" id="record-btn">Record</button>
                    </form>
                    <div id="record-status" class="muted"></div>
                    <div id="result"></div>
                </section>
                <section class="panel" id="vocab-panel">
                    <h2>Vocabulary</h2>
                    <div id="vocab-counts" class="muted"></div>
                    <ul id="vocab-list"></ul>
                </section>
                <section class="panel" id="song-panel">
                    <h2>Song</h2>
                    <select id="template-select"></select>
                    <button id="generate-btn">Generate</button>
                    <div id="song-info"></div>
                </section>
            </main>`;

        this.el('text-form').addEventListener('submit', (e) => {
            e.preventDefault();
            void this.onSubmitText();
        });
        this.el('record-btn').addEventListener('click', () => void this.onRecordToggle());
        this.el('generate-btn').addEventListener('click', () => void this.onGenerateSong());
        this.el('banner').addEventListener('click', () => this.state.dismissBanner());

        this.state.subscribe((s) => this.render(s));
        void this.state.refreshVocabulary();
        void this.state.loadTemplates();
    }

    private el(id: string): HTMLElement {
        const node = this.root.querySelector(`#${id}`);
        if (!node) {
            throw new Error(`missing element #${id}`);
        }
        return node as HTMLElement;
    }

    private async onSubmitText(): Promise<void> {
        const input = this.el('text-input') as HTMLInputElement;
        const ok = await this.state.submitText(input.value);
        if (ok) {
            input.value = '';
        }
    }

    private async onRecordToggle(): Promise<void> {
        const button = this.el('record-btn');
        const status = this.el('record-status');
        if (!this.recorder.active) {
            try {
                await this.recorder.start();
                button.textContent = 'Stop';
                status.textContent = 'Recording…';
            } catch {
                status.textContent = 'Microphone unavailable. Allow access in your browser and retry.';
            }
            return;
        }
        button.textContent = 'Record';
        try {
            const result = await this.recorder.stop();
            status.textContent = result.truncated
                ? `Recording longer than ${MAX_RECORDING_SECONDS} s was truncated.`
                : `Captured ${result.seconds.toFixed(1)} s.`;
            await this.state.submitRecording(result.wav);
        } catch (err) {
            status.textContent = err instanceof Error ? err.message : String(err);
        }
    }

    private async onGenerateSong(): Promise<void> {
        const select = this.el('template-select') as HTMLSelectElement;
        const song = await this.state.generateSong(select.value);
        if (song) {
            await this.playSong(song.song_id);
        }
    }

    private async playSong(songId: string): Promise<void> {
        const bytes = await this.state.songAudio(songId);
        const url = URL.createObjectURL(new Blob([bytes], { type: 'audio/wav' }));
        if (this.audioEl) {
            URL.revokeObjectURL(this.audioEl.src);
        } else {
            this.audioEl = new Audio();
        }
        this.audioEl.src = url;
        await this.audioEl.play();
    }

    private render(s: ViewState): void {
        const banner = this.el('banner');
        banner.classList.toggle('hidden', s.banner === null);
        banner.textContent = s.banner ?? '';

        (this.el('submit-btn') as HTMLButtonElement).disabled = s.pending.process;
        (this.el('generate-btn') as HTMLButtonElement).disabled = s.pending.song;

        this.renderResult(s.currentResult);
        this.renderVocabulary(s);
        this.renderSongPanel(s);
    }

    private renderResult(result: ProcessResult | null): void {
        const host = this.el('result');
        if (!result) {
            host.innerHTML = '';
            return;
        }
        const newWords = new Set(result.vocab_report.new_words.map(([surface]) => surface));
        const grammar = result.grammar
            .map((n) => `<li><b>${escapeHtml(n.pattern)}</b> ${escapeHtml(n.explanation)}</li>`)
            .join('');
        host.innerHTML = `
            <table class="triple">
                <tr><th>Kanji</th><td lang="ja">${escapeHtml(result.triple.kanji)}</td></tr>
                <tr><th>Kana</th><td lang="ja">${escapeHtml(result.triple.kana)}</td></tr>
                <tr><th>Romaji</th><td>${escapeHtml(result.triple.romaji)}</td></tr>
            </table>
            <ul class="grammar">${grammar}</ul>
            <div class="muted">${
                newWords.size ? `New words: ${[...newWords].map(escapeHtml).join(', ')}` : ''
            }</div>`;
    }

    private renderVocabulary(s: ViewState): void {
        const list = this.el('vocab-list');
        const counts = this.el('vocab-counts');
        if (!s.vocab) {
            counts.textContent = '';
            list.innerHTML = '';
            return;
        }
        counts.textContent = `${s.vocab.counts.learning} learning, ${s.vocab.counts.learned} learned`;
        list.innerHTML = s.vocab.entries.map((e) => vocabRowHtml(e)).join('');
    }

    private renderSongPanel(s: ViewState): void {
        const select = this.el('template-select') as HTMLSelectElement;
        const chosen = select.value;
        select.innerHTML = s.templates
            .map((t) => `<option value="${escapeHtml(t.template_id)}">${escapeHtml(t.template_id)} (${t.slot_count} slots)</option>`)
            .join('');
        if (chosen && s.templates.some((t) => t.template_id === chosen)) {
            select.value = chosen;
        }
        const info = this.el('song-info');
        if (!s.currentSong) {
            info.innerHTML = s.vocab && s.vocab.entries.length === 0
                ? '<p class="muted">Translate some sentences first, then generate a song.</p>'
                : '';
            return;
        }
        const song = s.currentSong;
        info.innerHTML = `
            <p>Duration: <b>${song.duration_seconds.toFixed(2)} s</b></p>
            <p lang="ja">${escapeHtml(song.lyric)}</p>
            <p class="muted">Slot words: ${song.slot_words.map(escapeHtml).join(', ')}</p>
            <button id="replay-btn">Play again</button>`;
        this.el('replay-btn').addEventListener('click', () => void this.playSong(song.song_id));
    }
}

/** One vocabulary row: 5-segment bar, server values only, canonical line as tooltip. */
export function vocabRowHtml(entry: VocabEntry): string {
    const segments = Array.from({ length: MAX_PROGRESS }, (_, i) =>
        `<span class="seg ${i < entry.progress ? 'on' : ''}"></span>`,
    ).join('');
    return `<li title="${escapeHtml(entry.display)}">
        <span lang="ja" class="surface">${escapeHtml(entry.surface)}</span>
        <span class="meaning">${escapeHtml(entry.meaning)}</span>
        <span class="bar">${segments}</span>
        <span class="ratio">${entry.progress}/${MAX_PROGRESS}</span>
    </li>`;
}

export function escapeHtml(text: string): string {
    return text
        .replace(/&/g, '&amp;')
        .replace(/</g, '&lt;')
        .replace(/>/g, '&gt;')
        .replace(/"/g, '&quot;');
}
