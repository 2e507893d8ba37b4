// Microphone capture. MediaRecorder gives us a compressed blob; we decode it
// with Web Audio, mix to mono, resample to 22050 Hz and encode PCM16 WAV so
// the upload matches what the service stores and plays back.

import { encodeWavPcm16, mixToMono, resampleLinear, TARGET_SAMPLE_RATE } from './wav.js';

export const MAX_RECORDING_SECONDS = 30;

export interface RecordingResult {
    wav: Blob;
    seconds: number;
    truncated: boolean;
}

export class Recorder {
    private mediaRecorder: MediaRecorder | null = null;
    private chunks: Blob[] = [];
    private stream: MediaStream | null = null;
    private startedAt = 0;

    get active(): boolean {
        return this.mediaRecorder !== null && this.mediaRecorder.state === 'recording';
    }

    async start(): Promise<void> {
        this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
        this.chunks = [];
        this.mediaRecorder = new MediaRecorder(this.stream);
        this.mediaRecorder.ondataavailable = (e) => {
            if (e.data && e.data.size > 0) {
                this.chunks.push(e.data);
            }
        };
        this.mediaRecorder.start();
        this.startedAt = performance.now();
    }

    async stop(): Promise<RecordingResult> {
        const recorder = this.mediaRecorder;
        if (!recorder) {
            throw new Error('not recording');
        }
        await new Promise<void>((resolve) => {
            recorder.onstop = () => resolve();
            recorder.stop();
        });
        this.stream?.getTracks().forEach((t) => t.stop());
        this.mediaRecorder = null;
        this.stream = null;

        const raw = new Blob(this.chunks, { type: recorder.mimeType });
        const context = new AudioContext();
        try {
            const decoded = await context.decodeAudioData(await raw.arrayBuffer());
            const channels: Float32Array[] = [];
            for (let c = 0; c < decoded.numberOfChannels; c++) {
                channels.push(decoded.getChannelData(c));
            }
            let mono = resampleLinear(mixToMono(channels), decoded.sampleRate, TARGET_SAMPLE_RATE);
            const limit = MAX_RECORDING_SECONDS * TARGET_SAMPLE_RATE;
            const truncated = mono.length > limit;
            if (truncated) {
                mono = mono.slice(0, limit);
            }
            const wav = new Blob([encodeWavPcm16(mono, TARGET_SAMPLE_RATE)], { type: 'audio/wav' });
            return { wav, seconds: mono.length / TARGET_SAMPLE_RATE, truncated };
        } finally {
            await context.close();
        }
    }

    elapsedSeconds(): number {
        return this.active ? (performance.now() - this.startedAt) / 1000 : 0;
    }
}
