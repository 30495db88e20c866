"""Pinned market files plus seeded random markets used by ``verify`` and the tests."""

from __future__ import annotations

import random
from importlib import resources

from ..market import Market
from ..marketfile import parse_market
from ..oracle import GeneratorConfig, generate_market


def corpus_files() -> list[tuple[str, Market]]:
    """Every ``*.mkt`` file shipped with the package, sorted by name."""
    root = resources.files(__name__)
    entries = sorted(p for p in root.iterdir() if p.name.endswith(".mkt"))
    return [(p.name[: -len(".mkt")], parse_market(p.read_text(encoding="utf-8"))) for p in entries]


def load(name: str) -> Market:
    text = resources.files(__name__).joinpath(f"{name}.mkt").read_text(encoding="utf-8")
    return parse_market(text)


def seeded_markets(seed: int, count: int, mode: str = "responsive") -> list[tuple[str, Market]]:
    """``count`` generated markets with up to 3 firms and 6 workers."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        cfg = GeneratorConfig(
            firm_count=1 + i % 3,
            worker_count=2 + (i // 3) % 5,
            quota_range=(1, 3),
            seed=rng.getrandbits(63),
            mode=mode,
        )
        out.append((f"{mode}-{seed}-{i}", generate_market(cfg)))
    return out
