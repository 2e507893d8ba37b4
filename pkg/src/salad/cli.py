"""Command-line access to the learner service.

Every command works against a local data directory (``--data-dir`` or
``$SALAD_DATA_DIR``, default ``./salad_data``) with mock providers unless a
config file binds live ones. Errors print the uniform error code on stderr
and exit nonzero.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import songcraft
from .audio import decode_wav
from .config import ServiceConfig, default_template_dir, load_config
from .pipeline import AbortedAt, LearnerInput, PipelineError, process_input, replay_corpus
from .providers import mock_provider_set
from .store import Store
from .vocab import MAX_PROGRESS, display_lines, format_progress_line


def _fail(code: str, message: str, exit_code: int = 1):
    click.echo(f"{code}: {message}", err=True)
    sys.exit(exit_code)


@click.group()
@click.option(
    "--data-dir",
    envvar="SALAD_DATA_DIR",
    default="salad_data",
    show_default=True,
    type=click.Path(path_type=Path),
    help="Store directory for vocabulary, sessions and audio.",
)
@click.pass_context
def main(ctx, data_dir: Path):
    """English-to-Japanese learning with vocabulary tracking and practice songs."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir


def _context(ctx):
    store = Store(ctx.obj["data_dir"])
    return store, mock_provider_set()


def _print_result(result):
    click.echo(result.triple.kanji)
    click.echo(result.triple.kana)
    click.echo(result.triple.romaji)
    for note in result.grammar:
        click.echo(f"[{note.pattern}] {note.explanation}")
    for line in result.vocab_report.display_lines:
        click.echo(line)


@main.command()
@click.argument("text", required=False)
@click.option("--audio", "audio_path", type=click.Path(exists=True, path_type=Path), help="WAV file to transcribe instead of text.")
@click.option("--session", "session_id", default="cli", show_default=True)
@click.pass_context
def process(ctx, text: str | None, audio_path: Path | None, session_id: str):
    """Translate one English input and update vocabulary progress."""
    if (text is None) == (audio_path is None):
        _fail("BadArguments", "pass exactly one of TEXT or --audio", 2)
    store, providers = _context(ctx)
    if audio_path is not None:
        clip = decode_wav(audio_path.read_bytes())
        learner_input = LearnerInput(kind="audio", session_id=session_id, audio=clip)
    else:
        learner_input = LearnerInput(kind="text", session_id=session_id, text=text)
    db = store.load_db()
    try:
        new_db, result = process_input(learner_input, db, providers, store=store)
    except PipelineError as exc:
        _fail(getattr(exc.cause, "code", type(exc.cause).__name__), f"{exc.stage}: {exc.cause}")
    store.save_db(new_db)
    _print_result(result)


@main.group()
def vocab():
    """Inspect tracked vocabulary."""


@vocab.command("list")
@click.option("--learning", "filter_", flag_value="learning", default=None)
@click.option("--learned", "filter_", flag_value="learned")
@click.pass_context
def vocab_list(ctx, filter_: str | None):
    """One progress line per tracked word, deterministic order."""
    store, _ = _context(ctx)
    db = store.load_db()
    entries = sorted(db.entries.values(), key=lambda e: (e.progress, e.surface))
    if filter_ == "learning":
        entries = [e for e in entries if e.progress < MAX_PROGRESS]
    elif filter_ == "learned":
        entries = [e for e in entries if e.progress == MAX_PROGRESS]
    for entry in entries:
        click.echo(format_progress_line(entry))


@main.command()
@click.option("--template", "template_id", required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), help="Also write the rendered WAV here.")
@click.option("--template-dir", type=click.Path(exists=True, path_type=Path), default=None)
@click.pass_context
def song(ctx, template_id: str, out_path: Path | None, template_dir: Path | None):
    """Generate a practice song from under-learned vocabulary."""
    store, providers = _context(ctx)
    templates = songcraft.load_templates(template_dir or default_template_dir())
    template = templates.get(template_id)
    if template is None:
        _fail("UnknownTemplate", f"no template {template_id!r}; have {sorted(templates)}")
    db = store.load_db()
    try:
        rendered = songcraft.generate_song(db, template, providers, store)
    except songcraft.EmptyVocabulary as exc:
        _fail("EmptyVocabulary", str(exc))
    except songcraft.NoFittingWords as exc:
        _fail("NoFittingWords", str(exc))
    if out_path is not None:
        out_path.write_bytes(store.get_audio(rendered.audio_ref))
    click.echo(f"song_id: {rendered.song_id}")
    click.echo(f"duration: {rendered.duration:.3f}s")
    click.echo(f"slot_words: {' '.join(rendered.slot_words)}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path), default=None)
@click.pass_context
def serve(ctx, config_path: Path | None):
    """Run the HTTP service until signalled."""
    import uvicorn

    from .service import create_app

    if config_path is not None:
        config = load_config(config_path)
    else:
        config = ServiceConfig(data_dir=ctx.obj["data_dir"])
    frontend = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    app = create_app(config, static_dir=frontend if frontend.is_dir() else None)
    uvicorn.run(app, host=config.host, port=config.port)


@main.command()
@click.argument("inputs_file", type=click.Path(exists=True, path_type=Path))
@click.option("--session", "session_id", default="cli", show_default=True)
@click.pass_context
def replay(ctx, inputs_file: Path, session_id: str):
    """Process each line of a file as one English input, in order."""
    store, providers = _context(ctx)
    sentences = [line.strip() for line in inputs_file.read_text("utf-8").splitlines() if line.strip()]
    inputs = [LearnerInput(kind="text", session_id=session_id, text=s) for s in sentences]
    db = store.load_db()
    try:
        new_db, results = replay_corpus(inputs, db, providers, store=store)
    except AbortedAt as exc:
        if exc.database is not None:
            store.save_db(exc.database)  # keep the successfully replayed prefix
        _fail("AbortedAt", str(exc))
    store.save_db(new_db)
    for sentence, result in zip(sentences, results):
        click.echo(f"{sentence} -> {result.triple.kanji}")
    click.echo(f"processed {len(results)} inputs")
    for line in display_lines(new_db):
        click.echo(line)


if __name__ == "__main__":
    main()
