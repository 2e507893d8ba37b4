import { describe, expect, it } from 'vitest';

import { decodeWavPcm16, encodeWavPcm16, mixToMono, resampleLinear, TARGET_SAMPLE_RATE } from '../src/wav.js';

describe('encodeWavPcm16', () => {
    it('produces a well-formed RIFF header', () => {
        const buffer = encodeWavPcm16(new Float32Array([0, 0.5, -0.5]), TARGET_SAMPLE_RATE);
        const view = new DataView(buffer);
        const tag = (o: number) =>
            String.fromCharCode(view.getUint8(o), view.getUint8(o + 1), view.getUint8(o + 2), view.getUint8(o + 3));
        expect(tag(0)).toBe('RIFF');
        expect(tag(8)).toBe('WAVE');
        expect(view.getUint16(20, true)).toBe(1); // PCM
        expect(view.getUint16(22, true)).toBe(1); // mono
        expect(view.getUint32(24, true)).toBe(TARGET_SAMPLE_RATE);
        expect(view.getUint16(34, true)).toBe(16);
        expect(buffer.byteLength).toBe(44 + 3 * 2);
    });

    it('round-trips samples within quantization error', () => {
        const input = new Float32Array(500);
        for (let i = 0; i < input.length; i++) {
            input[i] = Math.sin((2 * Math.PI * 440 * i) / TARGET_SAMPLE_RATE) * 0.8;
        }
        const { samples, sampleRate } = decodeWavPcm16(encodeWavPcm16(input, TARGET_SAMPLE_RATE));
        expect(sampleRate).toBe(TARGET_SAMPLE_RATE);
        expect(samples.length).toBe(input.length);
        for (let i = 0; i < input.length; i++) {
            expect(Math.abs(samples[i] - input[i])).toBeLessThan(1 / 32000);
        }
    });

    it('clamps out-of-range samples instead of wrapping', () => {
        const { samples } = decodeWavPcm16(encodeWavPcm16(new Float32Array([2, -2]), 22050));
        expect(samples[0]).toBeCloseTo(1, 4);
        expect(samples[1]).toBeCloseTo(-1, 4);
    });
});

describe('resampleLinear', () => {
    it('is identity when rates match', () => {
        const input = new Float32Array([0.1, 0.2, 0.3]);
        expect(resampleLinear(input, 22050, 22050)).toBe(input);
    });

    it('halves the length within one sample when downsampling 2:1', () => {
        const input = new Float32Array(44100); // 1 s at 44100 Hz
        const out = resampleLinear(input, 44100, 22050);
        expect(Math.abs(out.length - 22050)).toBeLessThanOrEqual(1);
    });

    it('preserves a constant signal', () => {
        const input = new Float32Array(1000).fill(0.25);
        const out = resampleLinear(input, 48000, 22050);
        for (const v of out) {
            expect(v).toBeCloseTo(0.25, 6);
        }
    });

    it('keeps endpoints when upsampling', () => {
        const out = resampleLinear(new Float32Array([0, 1]), 10, 40);
        expect(out[0]).toBeCloseTo(0, 6);
        expect(out[out.length - 1]).toBeCloseTo(1, 6);
    });
});

describe('mixToMono', () => {
    it('averages two channels', () => {
        const out = mixToMono([new Float32Array([1, 0]), new Float32Array([0, 1])]);
        expect(out[0]).toBeCloseTo(0.5, 6);
        expect(out[1]).toBeCloseTo(0.5, 6);
    });

    it('passes a single channel through unchanged', () => {
        const only = new Float32Array([0.3]);
        expect(mixToMono([only])).toBe(only);
    });
});
