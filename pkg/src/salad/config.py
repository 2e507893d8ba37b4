"""Service configuration: a flat ``key = value`` text file.

Recognized keys (all optional, defaults in parentheses):

    listen_address            host:port to serve on (127.0.0.1:8765)
    data_dir                  store directory (./salad_data)
    template_dir              song template directory (shipped fixtures)
    max_concurrent_requests   concurrent request cap (8)
    cors_origin               allowed browser origin (http://127.0.0.1:8765)
    provider.<port>           mock | live, per port (mock)
    live.url                  chat-completion endpoint URL
    live.api_key_env          name of the env var holding the API key
    live.model                model name passed to the endpoint (default)

Secrets never live in the file: ``live.api_key_env`` names an environment
variable, the key itself is read from the environment at startup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

PORT_NAMES = ("translator", "grammarian", "recognizer", "speech_synth", "singing_synth", "lexicon")


class ConfigError(ValueError):
    pass


def default_template_dir() -> Path:
    return Path(str(resources.files("salad.data").joinpath("templates")))


@dataclass
class ServiceConfig:
    listen_address: str = "127.0.0.1:8765"
    data_dir: Path = Path("salad_data")
    template_dir: Path = field(default_factory=default_template_dir)
    max_concurrent_requests: int = 8
    cors_origin: str = "http://127.0.0.1:8765"
    provider_bindings: dict[str, str] = field(default_factory=lambda: {p: "mock" for p in PORT_NAMES})
    live_url: str = ""
    live_api_key_env: str = ""
    live_model: str = "default"

    @property
    def host(self) -> str:
        return self.listen_address.rsplit(":", 1)[0]

    @property
    def port(self) -> int:
        return int(self.listen_address.rsplit(":", 1)[1])

    def validate(self) -> None:
        if self.max_concurrent_requests < 1:
            raise ConfigError("max_concurrent_requests must be >= 1")
        for port, binding in self.provider_bindings.items():
            if port not in PORT_NAMES:
                raise ConfigError(f"unknown provider port {port!r}")
            if binding not in ("mock", "live"):
                raise ConfigError(f"provider.{port} must be mock or live, got {binding!r}")
            if binding == "live" and not (self.live_url and self.live_api_key_env):
                raise ConfigError(
                    f"provider.{port} is live but live.url / live.api_key_env are not set"
                )


def parse_config(text: str) -> ServiceConfig:
    config = ServiceConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "listen_address":
            config.listen_address = value
        elif key == "data_dir":
            config.data_dir = Path(value)
        elif key == "template_dir":
            config.template_dir = Path(value)
        elif key == "max_concurrent_requests":
            config.max_concurrent_requests = int(value)
        elif key == "cors_origin":
            config.cors_origin = value
        elif key.startswith("provider."):
            config.provider_bindings[key[len("provider.") :]] = value
        elif key == "live.url":
            config.live_url = value
        elif key == "live.api_key_env":
            config.live_api_key_env = value
        elif key == "live.model":
            config.live_model = value
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    config.validate()
    return config


def load_config(path: str | Path) -> ServiceConfig:
    return parse_config(Path(path).read_text("utf-8"))


def build_provider_set(config: ServiceConfig):
    """Bind each port to its configured adapter (mock unless told otherwise)."""
    from .providers import mock_provider_set

    providers = mock_provider_set()
    live_ports = [p for p, b in config.provider_bindings.items() if b == "live"]
    if live_ports:
        from .providers.live import LiveEndpoint, LiveGrammarian, LiveLexicon, LiveTranslator

        endpoint = LiveEndpoint(config.live_url, config.live_api_key_env, model=config.live_model)
        live_factories = {
            "translator": lambda: LiveTranslator(endpoint),
            "grammarian": lambda: LiveGrammarian(endpoint),
            "lexicon": lambda: LiveLexicon(endpoint),
        }
        for port in live_ports:
            factory = live_factories.get(port)
            if factory is None:
                raise ConfigError(f"port {port!r} has no live adapter; use mock")
            setattr(providers, port, factory())
            providers.bindings[port] = "live"
    return providers
