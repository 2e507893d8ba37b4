"""Table-driven Japanese text utilities: kana -> romaji, kana -> phonemes, mora counting.

All three operations are pure functions over the shipped kana table
(``data/kana_table.tsv``). Katakana input is folded to hiragana before lookup,
the sokuon and the long-vowel mark are handled by composition rules on top of
the table, and everything else must be a table entry or the input is rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

VOWELS = ("a", "i", "u", "e", "o")

SOKUON = "っ"
MORAIC_N = "ん"
LONG_VOWEL_MARK = "ー"

# romaji fallback for a sokuon with nothing to geminate (utterance-final っ)
BARE_SOKUON_ROMAJI = "t"


class UnmappableCodePoint(ValueError):
    """A character in the input has no entry in the kana table."""

    def __init__(self, char: str, position: int):
        self.char = char
        self.position = position
        super().__init__(f"unmappable code point {char!r} at position {position}")


@dataclass(frozen=True)
class PhonemeUnit:
    """One mora: its phoneme labels and position in the mora sequence."""

    symbols: tuple[str, ...]
    mora_index: int


def _fold_katakana(text: str) -> str:
    # katakana block U+30A1..U+30F6 sits 0x60 above hiragana
    out = []
    for ch in text:
        code = ord(ch)
        if 0x30A1 <= code <= 0x30F6:
            out.append(chr(code - 0x60))
        else:
            out.append(ch)
    return "".join(out)


@lru_cache(maxsize=1)
def _load_table() -> dict[str, tuple[str, tuple[str, ...]]]:
    table: dict[str, tuple[str, tuple[str, ...]]] = {}
    data = resources.files("salad.data").joinpath("kana_table.tsv").read_text("utf-8")
    for line in data.splitlines():
        if not line or line.startswith("#"):
            continue
        kana, romaji, phonemes = line.split("\t")
        table[kana] = (romaji, tuple(phonemes.split(" ")))
    return table


def kana_table() -> dict[str, tuple[str, tuple[str, ...]]]:
    """The shipped kana -> (romaji, phonemes) table, keyed by hiragana."""
    return dict(_load_table())


def phoneme_alphabet() -> frozenset[str]:
    labels = set()
    for _, phonemes in _load_table().values():
        labels.update(phonemes)
    return frozenset(labels)


def validate_kana(text: str) -> None:
    """Reject strings containing anything but kana, small-kana, sokuon, or ー."""
    table = _load_table()
    folded = _fold_katakana(text)
    for i, ch in enumerate(folded):
        if ch == LONG_VOWEL_MARK:
            continue
        if ch in table:
            continue
        # small ゃゅょ are only valid as the tail of a digraph
        if ch in "ゃゅょ" and i > 0 and folded[i - 1] + ch in table:
            continue
        raise UnmappableCodePoint(text[i], i)


def _segment(text: str) -> list[tuple[str, int]]:
    """Split folded kana into raw mora tokens with their source positions.

    Greedy two-character lookahead so digraphs (きゃ) stay one mora; っ, ん and
    ー each come out as their own token.
    """
    table = _load_table()
    folded = _fold_katakana(text)
    tokens: list[tuple[str, int]] = []
    i = 0
    while i < len(folded):
        two = folded[i : i + 2]
        if len(two) == 2 and two in table:
            tokens.append((two, i))
            i += 2
            continue
        ch = folded[i]
        if ch in table or ch == LONG_VOWEL_MARK:
            tokens.append((ch, i))
            i += 1
            continue
        raise UnmappableCodePoint(text[i], i)
    return tokens


def kana_to_phonemes(kana: str) -> list[PhonemeUnit]:
    """One PhonemeUnit per mora; ん -> [N], っ -> [cl], ー repeats the prior vowel."""
    table = _load_table()
    units: list[PhonemeUnit] = []
    last_vowel: str | None = None
    for token, pos in _segment(kana):
        if token == LONG_VOWEL_MARK:
            if last_vowel is None:
                raise UnmappableCodePoint(LONG_VOWEL_MARK, pos)
            symbols: tuple[str, ...] = (last_vowel,)
        else:
            symbols = table[token][1]
        if symbols[-1] in VOWELS:
            last_vowel = symbols[-1]
        units.append(PhonemeUnit(symbols=symbols, mora_index=len(units)))
    return units


def kana_to_romaji(kana: str) -> str:
    """Hepburn-style transliteration with wāpuro long vowels.

    Sokuon doubles the next mora's initial consonant (ch geminates as tch);
    ん is written n, with an apostrophe before a vowel or y.
    """
    table = _load_table()
    tokens = _segment(kana)
    parts: list[str] = []
    last_vowel: str | None = None
    i = 0
    while i < len(tokens):
        token, pos = tokens[i]
        if token == LONG_VOWEL_MARK:
            if last_vowel is None:
                raise UnmappableCodePoint(LONG_VOWEL_MARK, pos)
            parts.append(last_vowel)
            i += 1
            continue
        if token == SOKUON:
            nxt = tokens[i + 1][0] if i + 1 < len(tokens) else None
            if nxt is not None and nxt not in (SOKUON, MORAIC_N, LONG_VOWEL_MARK):
                nxt_romaji = table[nxt][0]
                if nxt_romaji[0] not in VOWELS:
                    parts.append("t" if nxt_romaji.startswith("ch") else nxt_romaji[0])
                    i += 1
                    continue
            parts.append(BARE_SOKUON_ROMAJI)
            i += 1
            continue
        if token == MORAIC_N:
            nxt = tokens[i + 1][0] if i + 1 < len(tokens) else None
            romaji = "n"
            if nxt is not None and nxt != SOKUON and nxt != LONG_VOWEL_MARK:
                nxt_romaji = table[nxt][0]
                if nxt_romaji[0] in VOWELS or nxt_romaji[0] == "y":
                    romaji = "n'"
            parts.append(romaji)
            i += 1
            continue
        romaji = table[token][0]
        parts.append(romaji)
        if romaji[-1] in VOWELS:
            last_vowel = romaji[-1]
        i += 1
    return "".join(parts)


def mora_count(kana: str) -> int:
    """Number of morae; equals len(kana_to_phonemes(kana)) by construction."""
    return len(kana_to_phonemes(kana))
