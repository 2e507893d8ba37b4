// Single owner of UI state. Async actions commit through a per-action issue
// sequence: if a newer request for the same action has already committed, a
// stale response is dropped instead of overwriting fresher state.

import { ApiClient, ProcessResult, SongResult, TemplateInfo, VocabularyView } from './api.js';

export interface ViewState {
    currentResult: ProcessResult | null;
    vocab: VocabularyView | null;
    templates: TemplateInfo[];
    currentSong: SongResult | null;
    sessionId: string;
    pending: { process: boolean; vocab: boolean; song: boolean };
    banner: string | null;
}

type Listener = (state: ViewState) => void;
type PendingKey = keyof ViewState['pending'];

export class AppState {
    private state: ViewState = {
        currentResult: null,
        vocab: null,
        templates: [],
        currentSong: null,
        sessionId: 'default',
        pending: { process: false, vocab: false, song: false },
        banner: null,
    };
    private listeners: Listener[] = [];
    private issued: Record<PendingKey, number> = { process: 0, vocab: 0, song: 0 };
    private committed: Record<PendingKey, number> = { process: 0, vocab: 0, song: 0 };
    private audioCache = new Map<string, ArrayBuffer>();

    constructor(private api: ApiClient) {}

    get current(): ViewState {
        return this.state;
    }

    subscribe(listener: Listener): void {
        this.listeners.push(listener);
        listener(this.state);
    }

    private commit(patch: Partial<ViewState>): void {
        this.state = { ...this.state, ...patch };
        for (const listener of this.listeners) {
            listener(this.state);
        }
    }

    private setPending(key: PendingKey, value: boolean): void {
        this.commit({ pending: { ...this.state.pending, [key]: value } });
    }

    /**
     * Run one async action under the ordered-commit rule. Returns the ticket's
     * result, or null if a newer ticket for the same action committed first.
     */
    private async runOrdered<T>(key: PendingKey, action: () => Promise<T>): Promise<T | null> {
        const ticket = ++this.issued[key];
        this.setPending(key, true);
        try {
            const value = await action();
            if (ticket <= this.committed[key]) {
                return null; // superseded; never overwrite newer state
            }
            this.committed[key] = ticket;
            return value;
        } finally {
            if (ticket === this.issued[key]) {
                this.setPending(key, false);
            }
        }
    }

    async submitText(text: string): Promise<boolean> {
        if (!text.trim()) {
            return false; // client-side validation, no request
        }
        return this.submit(() => this.api.processText(text.trim(), this.state.sessionId));
    }

    async submitRecording(wav: Blob): Promise<boolean> {
        return this.submit(() => this.api.processAudio(wav, this.state.sessionId));
    }

    private async submit(call: () => Promise<ProcessResult>): Promise<boolean> {
        try {
            const result = await this.runOrdered('process', call);
            if (result === null) {
                return false;
            }
            this.commit({ currentResult: result, banner: null });
            await this.refreshVocabulary();
            return true;
        } catch (err) {
            this.commit({ banner: describeError(err) });
            return false;
        }
    }

    async refreshVocabulary(): Promise<void> {
        try {
            const vocab = await this.runOrdered('vocab', () => this.api.vocabulary());
            if (vocab !== null) {
                this.commit({ vocab });
            }
        } catch (err) {
            this.commit({ banner: describeError(err) });
        }
    }

    async loadTemplates(): Promise<void> {
        try {
            this.commit({ templates: await this.api.templates() });
        } catch (err) {
            this.commit({ banner: describeError(err) });
        }
    }

    async generateSong(templateId: string): Promise<SongResult | null> {
        try {
            const song = await this.runOrdered('song', () => this.api.generateSong(templateId));
            if (song !== null) {
                this.commit({ currentSong: song, banner: null });
            }
            return song;
        } catch (err) {
            this.commit({ banner: describeError(err) });
            return null;
        }
    }

    /** Fetch a song clip once; replays come from the cache, not the network. */
    async songAudio(audioId: string): Promise<ArrayBuffer> {
        const cached = this.audioCache.get(audioId);
        if (cached) {
            return cached;
        }
        const bytes = await this.api.fetchAudio(audioId);
        this.audioCache.set(audioId, bytes);
        return bytes;
    }

    dismissBanner(): void {
        this.commit({ banner: null });
    }
}

export function describeError(err: unknown): string {
    if (err instanceof Error) {
        return err.message;
    }
    return String(err);
}
