"""PCM16 mono audio clips and their WAV (RIFF) encoding.

Clips are 22050 Hz, 16-bit, mono. WAV files may carry an optional ``tscr``
chunk holding a UTF-8 transcript; fixture recordings use it so the speech
recognition path can run offline. The reader and writer are hand-rolled
because the stdlib ``wave`` module cannot round-trip custom chunks.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

SAMPLE_RATE = 22050
TRANSCRIPT_CHUNK_ID = b"tscr"


class MalformedWav(ValueError):
    pass


@dataclass(frozen=True)
class AudioClip:
    samples: tuple[int, ...]
    sample_rate: int = SAMPLE_RATE
    transcript: str | None = None

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def _boundary(seconds: float, rate: int) -> int:
    # deterministic half-up rounding of a time to a sample index
    return math.floor(seconds * rate + 0.5)


def tone(frequency: float, seconds: float, rate: int = SAMPLE_RATE, amplitude: float = 0.3) -> list[int]:
    """One sine tone, length = round(seconds * rate) samples."""
    n = _boundary(seconds, rate)
    peak = amplitude * 32767.0
    return [int(peak * math.sin(2.0 * math.pi * frequency * i / rate)) for i in range(n)]


def tone_sequence(segments: list[tuple[float, float]], rate: int = SAMPLE_RATE) -> AudioClip:
    """Concatenated tones placed at cumulative-time boundaries.

    Each segment is (frequency, seconds). Placing segment edges at rounded
    cumulative times keeps the total length within half a sample of the exact
    sum regardless of how the per-segment durations quantize.
    """
    samples: list[int] = []
    t = 0.0
    start = 0
    for frequency, seconds in segments:
        t += seconds
        end = _boundary(t, rate)
        peak = 0.3 * 32767.0
        for i in range(end - start):
            samples.append(int(peak * math.sin(2.0 * math.pi * frequency * i / rate)))
        start = end
    return AudioClip(samples=tuple(samples), sample_rate=rate)


def encode_wav(clip: AudioClip) -> bytes:
    """Serialize to RIFF/WAVE: fmt + data, plus a tscr chunk when a transcript is set."""
    data = struct.pack(f"<{len(clip.samples)}h", *clip.samples)
    fmt = struct.pack("<HHIIHH", 1, 1, clip.sample_rate, clip.sample_rate * 2, 2, 16)
    chunks = [(b"fmt ", fmt), (b"data", data)]
    if clip.transcript is not None:
        chunks.append((TRANSCRIPT_CHUNK_ID, clip.transcript.encode("utf-8")))
    body = b"WAVE"
    for cid, payload in chunks:
        body += cid + struct.pack("<I", len(payload)) + payload
        if len(payload) % 2:
            body += b"\x00"
    return b"RIFF" + struct.pack("<I", len(body)) + body


def decode_wav(data: bytes) -> AudioClip:
    """Parse a PCM16 mono WAV, picking up the transcript chunk if present."""
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedWav("not a RIFF/WAVE file")
    pos = 12
    rate = None
    pcm: bytes | None = None
    transcript = None
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        payload = data[pos + 8 : pos + 8 + size]
        if len(payload) != size:
            raise MalformedWav(f"truncated chunk {cid!r}")
        if cid == b"fmt ":
            audio_format, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", payload)
            if audio_format != 1 or channels != 1 or bits != 16:
                raise MalformedWav("only PCM16 mono is supported")
        elif cid == b"data":
            pcm = payload
        elif cid == TRANSCRIPT_CHUNK_ID:
            transcript = payload.decode("utf-8")
        pos += 8 + size + (size % 2)
    if rate is None or pcm is None:
        raise MalformedWav("missing fmt or data chunk")
    samples = struct.unpack(f"<{len(pcm) // 2}h", pcm[: (len(pcm) // 2) * 2])
    return AudioClip(samples=samples, sample_rate=rate, transcript=transcript)
