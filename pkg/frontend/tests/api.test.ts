import { describe, expect, it } from 'vitest';

import { ApiClient, ApiError } from '../src/api.js';

function jsonResponse(status: number, body: unknown): Response {
    return new Response(JSON.stringify(body), {
        status,
        headers: { 'Content-Type': 'application/json' },
    });
}

function clientWith(handler: (url: string, init?: RequestInit) => Response) {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new ApiClient('', async (input, init) => {
        const url = String(input);
        calls.push({ url, init });
        return handler(url, init);
    });
    return { client, calls };
}

describe('ApiClient.processText', () => {
    it('posts JSON and returns the parsed result', async () => {
        const result = {
            transcript: 'I eat sushi',
            triple: { source_en: 'I eat sushi', kanji: '私は寿司を食べます', kana: '', romaji: '', segmentation: [] },
            grammar: [],
            vocab_report: { new_words: [], advanced_words: [], display_lines: [] },
            pronunciation_ref: null,
            elapsed_ms: 3,
            received_at: '2026-08-01T00:00:00Z',
        };
        const { client, calls } = clientWith(() => jsonResponse(200, result));
        const got = await client.processText('I eat sushi', 's1');
        expect(got.triple.kanji).toBe('私は寿司を食べます');
        expect(calls[0].url).toBe('/api/process');
        expect(JSON.parse(calls[0].init?.body as string)).toEqual({ text: 'I eat sushi', session_id: 's1' });
    });

    it('raises ApiError carrying the service error body', async () => {
        const { client } = clientWith(() =>
            jsonResponse(422, { code: 'UntranslatableInput', stage: 'TranslationFailed', message: 'no match' }),
        );
        const err = await client.processText('zyzzyva').catch((e) => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(422);
        expect(err.body.code).toBe('UntranslatableInput');
        expect(err.body.stage).toBe('TranslationFailed');
    });

    it('wraps non-JSON failures in a transport error', async () => {
        const { client } = clientWith(() => new Response('gateway timeout', { status: 504 }));
        const err = await client.vocabulary().catch((e) => e);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.body.code).toBe('HttpError');
    });
});

describe('ApiClient.processAudio', () => {
    it('uploads the WAV as multipart form data', async () => {
        const { client, calls } = clientWith(() =>
            jsonResponse(200, {
                transcript: 't', triple: { source_en: 't', kanji: '', kana: '', romaji: '', segmentation: [] },
                grammar: [], vocab_report: { new_words: [], advanced_words: [], display_lines: [] },
                pronunciation_ref: null, elapsed_ms: 1, received_at: '',
            }),
        );
        await client.processAudio(new Blob([new Uint8Array(8)], { type: 'audio/wav' }));
        const body = calls[0].init?.body as FormData;
        expect(body).toBeInstanceOf(FormData);
        expect(body.get('audio')).toBeTruthy();
    });
});

describe('ApiClient.templates', () => {
    it('unwraps the templates list', async () => {
        const { client } = clientWith(() =>
            jsonResponse(200, { templates: [{ template_id: 'sakura', slot_count: 2, note_count: 18, slot_mora_budget: 6 }] }),
        );
        const templates = await client.templates();
        expect(templates).toHaveLength(1);
        expect(templates[0].template_id).toBe('sakura');
    });
});

describe('ApiClient.fetchAudio', () => {
    it('returns raw bytes on success and ApiError on 404', async () => {
        const bytes = new Uint8Array([82, 73, 70, 70]);
        const { client } = clientWith((url) =>
            url.endsWith('/api/audio/deadbeef')
                ? new Response(bytes, { status: 200 })
                : jsonResponse(404, { code: 'NotFound', stage: 'Audio', message: 'missing' }),
        );
        const buffer = await client.fetchAudio('deadbeef');
        expect(new Uint8Array(buffer)).toEqual(bytes);
        await expect(client.fetchAudio('missing')).rejects.toBeInstanceOf(ApiError);
    });
});
