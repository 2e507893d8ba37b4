// Typed client for the service HTTP API. All linguistic content (triples,
// glosses, progress values, durations) is passed through verbatim; the UI
// never computes any of it locally.

export interface TranslationTriple {
    source_en: string;
    kanji: string;
    kana: string;
    romaji: string;
    segmentation: [string, string][];
}

export interface GrammarNote {
    pattern: string;
    explanation: string;
}

export interface VocabReport {
    new_words: [string, string][];
    advanced_words: [string, number, number][];
    display_lines: string[];
}

export interface ProcessResult {
    transcript: string;
    triple: TranslationTriple;
    grammar: GrammarNote[];
    vocab_report: VocabReport;
    pronunciation_ref: string | null;
    elapsed_ms: number;
    received_at: string;
}

export interface VocabEntry {
    surface: string;
    reading: string;
    meaning: string;
    progress: number;
    exposure_count: number;
    display: string;
}

export interface VocabularyView {
    entries: VocabEntry[];
    display_lines: string[];
    counts: { learning: number; learned: number };
}

export interface SongResult {
    song_id: string;
    duration_seconds: number;
    slot_words: string[];
    lyric: string;
    used_learned_fallback: boolean;
}

export interface TemplateInfo {
    template_id: string;
    slot_count: number;
    note_count: number;
    slot_mora_budget: number;
}

export interface ApiErrorBody {
    code: string;
    stage: string;
    message: string;
}

export class ApiError extends Error {
    constructor(
        public readonly status: number,
        public readonly body: ApiErrorBody,
    ) {
        super(`${body.code}: ${body.message}`);
    }
}

type FetchLike = typeof fetch;

export class ApiClient {
    constructor(
        private baseUrl: string = '',
        private fetchFn: FetchLike = (...args) => fetch(...args),
    ) {}

    private async parse<T>(response: Response): Promise<T> {
        if (response.ok) {
            return (await response.json()) as T;
        }
        let body: ApiErrorBody;
        try {
            body = (await response.json()) as ApiErrorBody;
        } catch {
            body = { code: 'HttpError', stage: 'Transport', message: `HTTP ${response.status}` };
        }
        throw new ApiError(response.status, body);
    }

    async processText(text: string, sessionId?: string): Promise<ProcessResult> {
        const response = await this.fetchFn(`${this.baseUrl}/api/process`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(sessionId ? { text, session_id: sessionId } : { text }),
        });
        return this.parse<ProcessResult>(response);
    }

    async processAudio(wav: Blob, sessionId?: string): Promise<ProcessResult> {
        const form = new FormData();
        form.append('audio', wav, 'recording.wav');
        if (sessionId) {
            form.append('session_id', sessionId);
        }
        const response = await this.fetchFn(`${this.baseUrl}/api/process`, {
            method: 'POST',
            body: form,
        });
        return this.parse<ProcessResult>(response);
    }

    async vocabulary(): Promise<VocabularyView> {
        const response = await this.fetchFn(`${this.baseUrl}/api/vocabulary`);
        return this.parse<VocabularyView>(response);
    }

    async templates(): Promise<TemplateInfo[]> {
        const response = await this.fetchFn(`${this.baseUrl}/api/templates`);
        const data = await this.parse<{ templates: TemplateInfo[] }>(response);
        return data.templates;
    }

    async generateSong(templateId: string): Promise<SongResult> {
        const response = await this.fetchFn(`${this.baseUrl}/api/song`, {
            method: 'POST',
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify({ template_id: templateId }),
        });
        return this.parse<SongResult>(response);
    }

    async fetchAudio(audioId: string): Promise<ArrayBuffer> {
        const response = await this.fetchFn(`${this.baseUrl}/api/audio/${audioId}`);
        if (!response.ok) {
            throw new ApiError(response.status, {
                code: 'NotFound',
                stage: 'Audio',
                message: `no audio ${audioId}`,
            });
        }
        return response.arrayBuffer();
    }
}
