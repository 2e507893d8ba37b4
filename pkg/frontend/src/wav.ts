// PCM16 mono WAV encoding and sample-rate conversion for microphone uploads.
// The service expects RIFF PCM16 mono at 22050 Hz.

export const TARGET_SAMPLE_RATE = 22050;

/** Linear-interpolation resampler; returns the input untouched if rates match. */
export function resampleLinear(samples: Float32Array, fromRate: number, toRate: number): Float32Array {
    if (fromRate === toRate || samples.length === 0) {
        return samples;
    }
    const outLength = Math.max(1, Math.round((samples.length * toRate) / fromRate));
    const out = new Float32Array(outLength);
    const step = (samples.length - 1) / Math.max(1, outLength - 1);
    for (let i = 0; i < outLength; i++) {
        const pos = i * step;
        const lo = Math.floor(pos);
        const hi = Math.min(lo + 1, samples.length - 1);
        const frac = pos - lo;
        out[i] = samples[lo] * (1 - frac) + samples[hi] * frac;
    }
    return out;
}

/** Average all channels down to one. */
export function mixToMono(channels: Float32Array[]): Float32Array {
    if (channels.length === 1) {
        return channels[0];
    }
    const out = new Float32Array(channels[0].length);
    for (const channel of channels) {
        for (let i = 0; i < out.length; i++) {
            out[i] += channel[i] / channels.length;
        }
    }
    return out;
}

/** Encode float samples in [-1, 1] as a RIFF PCM16 mono WAV file. */
export function encodeWavPcm16(samples: Float32Array, sampleRate: number): ArrayBuffer {
    const dataBytes = samples.length * 2;
    const buffer = new ArrayBuffer(44 + dataBytes);
    const view = new DataView(buffer);
    const writeTag = (offset: number, tag: string) => {
        for (let i = 0; i < 4; i++) {
            view.setUint8(offset + i, tag.charCodeAt(i));
        }
    };
    writeTag(0, 'RIFF');
    view.setUint32(4, 36 + dataBytes, true);
    writeTag(8, 'WAVE');
    writeTag(12, 'fmt ');
    view.setUint32(16, 16, true);
    view.setUint16(20, 1, true); // PCM
    view.setUint16(22, 1, true); // mono
    view.setUint32(24, sampleRate, true);
    view.setUint32(28, sampleRate * 2, true);
    view.setUint16(32, 2, true);
    view.setUint16(34, 16, true);
    writeTag(36, 'data');
    view.setUint32(40, dataBytes, true);
    for (let i = 0; i < samples.length; i++) {
        const clamped = Math.max(-1, Math.min(1, samples[i]));
        view.setInt16(44 + i * 2, Math.round(clamped * 32767), true);
    }
    return buffer;
}

/** Decode a PCM16 mono WAV back to floats (used by tests and playback fallback). */
export function decodeWavPcm16(buffer: ArrayBuffer): { samples: Float32Array; sampleRate: number } {
    const view = new DataView(buffer);
    const tag = (offset: number) =>
        String.fromCharCode(view.getUint8(offset), view.getUint8(offset + 1), view.getUint8(offset + 2), view.getUint8(offset + 3));
    if (tag(0) !== 'RIFF' || tag(8) !== 'WAVE') {
        throw new Error('not a RIFF/WAVE file');
    }
    let offset = 12;
    let sampleRate = 0;
    let samples: Float32Array | null = null;
    while (offset + 8 <= view.byteLength) {
        const chunkId = tag(offset);
        const size = view.getUint32(offset + 4, true);
        if (chunkId === 'fmt ') {
            sampleRate = view.getUint32(offset + 12, true);
        } else if (chunkId === 'data') {
            const count = Math.floor(size / 2);
            samples = new Float32Array(count);
            for (let i = 0; i < count; i++) {
                samples[i] = view.getInt16(offset + 8 + i * 2, true) / 32767;
            }
        }
        offset += 8 + size + (size % 2);
    }
    if (!sampleRate || !samples) {
        throw new Error('missing fmt or data chunk');
    }
    return { samples, sampleRate };
}
