"""salad: English-to-Japanese learning with per-word progress tracking,
deterministic offline providers, and vocabulary-driven practice songs."""

__version__ = "0.1.0"
