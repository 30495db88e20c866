"""Reading and writing the line-oriented market file format.

    # comment
    firms: f1 f2
    workers: w1 w2 w3
    pref w1: f1 f2
    pref f1: {w1 w2} {w3}
    pref f2: responsive q=2: w3 w1 w2
"""

from __future__ import annotations

import re
from pathlib import Path

from .errors import MarketError, ParseError
from .market import DEFAULT_BUDGET, Market, members, responsive_ranking

_TOKEN = re.compile(r"\s*(?:(?P<brace>[{}])|(?P<colon>:)|(?P<word>[^\s{}:#,]+)|(?P<comma>,))")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.']*\Z")
_QUOTA = re.compile(r"q=(\d+)\Z")


def _tokens(text: str, lineno: int) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise ParseError(f"unexpected character {text[col - 1]!r}", lineno, col)
        kind = m.lastgroup
        out.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    return [t for t in out if t[0] != "comma"]


def _check_name(name: str, lineno: int, col: int) -> str:
    if not _NAME.match(name):
        raise ParseError(f"invalid agent name {name!r}", lineno, col)
    return name


def parse_market(text: str, budget: int = DEFAULT_BUDGET) -> Market:
    """Parse market-file text into a :class:`Market`."""
    firms: list[str] | None = None
    workers: list[str] | None = None
    prefs: list[tuple[str, list, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        toks = _tokens(line, lineno)
        head = toks[0]
        if head[0] != "word":
            raise ParseError(f"unexpected {head[1]!r} at start of line", lineno, head[2])
        if head[1] in ("firms", "workers"):
            if len(toks) < 2 or toks[1][0] != "colon":
                raise ParseError(f"expected ':' after {head[1]}", lineno, head[2] + len(head[1]))
            names = []
            for kind, value, col in toks[2:]:
                if kind != "word":
                    raise ParseError(f"unexpected {value!r}", lineno, col)
                names.append(_check_name(value, lineno, col))
            if len(set(names)) != len(names):
                dup = next(n for n in names if names.count(n) > 1)
                raise ParseError(f"duplicate agent name {dup!r}", lineno, head[2])
            if head[1] == "firms":
                if firms is not None:
                    raise ParseError("firms declared twice", lineno, head[2])
                firms = names
            else:
                if workers is not None:
                    raise ParseError("workers declared twice", lineno, head[2])
                workers = names
        elif head[1] == "pref":
            if len(toks) < 3 or toks[1][0] != "word" or toks[2][0] != "colon":
                raise ParseError("expected 'pref <agent>: ...'", lineno, head[2])
            prefs.append((toks[1][1], toks[3:], lineno, toks[1][2]))
        else:
            raise ParseError(f"unknown directive {head[1]!r}", lineno, head[2])

    if not firms:
        raise ParseError("no firms declared")
    if not workers:
        raise ParseError("no workers declared")
    clash = set(firms) & set(workers)
    if clash:
        raise ParseError(f"name {sorted(clash)[0]!r} used for both a firm and a worker")
    firm_ix = {n: i for i, n in enumerate(firms)}
    worker_ix = {n: i for i, n in enumerate(workers)}

    worker_prefs: dict[int, tuple[int, ...]] = {}
    firm_prefs: dict[int, tuple[int, ...]] = {}
    for owner, body, lineno, col in prefs:
        if owner in worker_ix:
            w = worker_ix[owner]
            if w in worker_prefs:
                raise ParseError(f"second preference line for {owner}", lineno, col)
            worker_prefs[w] = _worker_ranking(body, firm_ix, lineno)
        elif owner in firm_ix:
            f = firm_ix[owner]
            if f in firm_prefs:
                raise ParseError(f"second preference line for {owner}", lineno, col)
            firm_prefs[f] = _firm_ranking(body, worker_ix, lineno)
        else:
            raise ParseError(f"unknown agent {owner!r}", lineno, col)

    for w, name in enumerate(workers):
        if w not in worker_prefs:
            raise ParseError(f"missing preference line for worker {name}")
    for f, name in enumerate(firms):
        if f not in firm_prefs:
            raise ParseError(f"missing preference line for firm {name}")
    try:
        return Market(
            tuple(firms),
            tuple(workers),
            tuple(worker_prefs[w] for w in range(len(workers))),
            tuple(firm_prefs[f] for f in range(len(firms))),
            budget,
        )
    except MarketError as exc:
        raise ParseError(str(exc)) from exc


def _worker_ranking(body, firm_ix, lineno) -> tuple[int, ...]:
    ranking: list[int] = []
    for kind, value, col in body:
        if kind != "word":
            raise ParseError(f"unexpected {value!r} in worker ranking", lineno, col)
        if value not in firm_ix:
            raise ParseError(f"unknown firm {value!r}", lineno, col)
        if firm_ix[value] in ranking:
            raise ParseError(f"duplicate ranking entry {value!r}", lineno, col)
        ranking.append(firm_ix[value])
    return tuple(ranking)


def _firm_ranking(body, worker_ix, lineno) -> tuple[int, ...]:
    if body and body[0][0] == "word" and body[0][1] == "responsive":
        return _responsive(body, worker_ix, lineno)
    ranking: list[int] = []
    i = 0
    while i < len(body):
        kind, value, col = body[i]
        if kind != "brace" or value != "{":
            raise ParseError(f"expected '{{' but found {value!r}", lineno, col)
        start = col
        mask = 0
        i += 1
        while True:
            if i >= len(body):
                raise ParseError("unterminated subset", lineno, start)
            kind, value, col = body[i]
            i += 1
            if kind == "brace" and value == "}":
                break
            if kind != "word":
                raise ParseError(f"unexpected {value!r} inside subset", lineno, col)
            if value not in worker_ix:
                raise ParseError(f"subset mentions unknown worker {value!r}", lineno, col)
            bit = 1 << worker_ix[value]
            if mask & bit:
                raise ParseError(f"duplicate member {value!r} in subset", lineno, col)
            mask |= bit
        if mask == 0:
            raise ParseError("the empty subset '{}' may not be listed", lineno, start)
        if mask in ranking:
            raise ParseError("duplicate ranking entry", lineno, start)
        ranking.append(mask)
    return tuple(ranking)


def _responsive(body, worker_ix, lineno) -> tuple[int, ...]:
    col = body[0][2]
    if len(body) < 3 or body[1][0] != "word" or body[2][0] != "colon":
        raise ParseError("expected 'responsive q=<k>: <workers>'", lineno, col)
    m = _QUOTA.match(body[1][1])
    if m is None or int(m.group(1)) < 1:
        raise ParseError(f"bad quota {body[1][1]!r}", lineno, body[1][2])
    order: list[int] = []
    for kind, value, c in body[3:]:
        if kind != "word":
            raise ParseError(f"unexpected {value!r} in responsive ranking", lineno, c)
        if value not in worker_ix:
            raise ParseError(f"unknown worker {value!r}", lineno, c)
        if worker_ix[value] in order:
            raise ParseError(f"duplicate ranking entry {value!r}", lineno, c)
        order.append(worker_ix[value])
    return responsive_ranking(order, int(m.group(1)))


def serialize_market(market: Market) -> str:
    """Render ``market`` in the file grammar; responsive sugar is expanded."""
    lines = [
        "firms: " + " ".join(market.firms),
        "workers: " + " ".join(market.workers),
    ]
    for w, ranking in enumerate(market.worker_prefs):
        lines.append(f"pref {market.workers[w]}:" + "".join(" " + market.firms[f] for f in ranking))
    for f, ranking in enumerate(market.firm_prefs):
        subsets = (
            " {" + " ".join(market.workers[i] for i in members(s)) + "}" for s in ranking
        )
        lines.append(f"pref {market.firms[f]}:" + "".join(subsets))
    return "\n".join(lines) + "\n"


def load_market(path: str | Path, budget: int = DEFAULT_BUDGET) -> Market:
    return parse_market(Path(path).read_text(encoding="utf-8"), budget)
