from .base import (
    EmptyScore,
    GrammarNote,
    Grammarian,
    Lexicon,
    ProviderError,
    ProviderSet,
    Recognizer,
    SingingSynth,
    SpeechSynth,
    TranslationTriple,
    Translator,
    UnknownWord,
    UnrecognizableAudio,
    UntranslatableInput,
)
from .mock import mock_provider_set

__all__ = [
    "EmptyScore",
    "GrammarNote",
    "Grammarian",
    "Lexicon",
    "ProviderError",
    "ProviderSet",
    "Recognizer",
    "SingingSynth",
    "SpeechSynth",
    "TranslationTriple",
    "Translator",
    "UnknownWord",
    "UnrecognizableAudio",
    "UntranslatableInput",
    "mock_provider_set",
]
