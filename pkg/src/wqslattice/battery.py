"""Exhaustive invariant battery run by ``wqs verify`` and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle
from .errors import MarketError
from .lattice import WqsLattice, blair_geq, cover_pairs, enumerate_wqs, join_table, meet_index
from .market import Market, check_choice_consistency, is_substitutable, satisfies_lad
from .matchings import blocking_pairs, empty_matching, format_matching, is_stable, is_worker_quasi_stable
from .tarski import (
    apply_T,
    check_corollaries,
    check_fixed_point_formula,
    check_isotone,
    check_join_with_stable,
    fixed_points,
    stabilize,
    t_table,
    worker_optimal_stable,
)

PASS, FAIL, SKIP, NOTE = "pass", "FAIL", "skip", "note"


@dataclass(frozen=True)
class Finding:
    market: str
    prop: str
    status: str
    detail: str = ""

    def line(self) -> str:
        tail = f"  {self.detail}" if self.detail else ""
        return f"[{self.market}] {self.prop}: {self.status}{tail}"


class _Run:
    def __init__(self, name: str):
        self.name = name
        self.findings: list[Finding] = []

    def record(self, prop: str, ok: bool, detail: str = "") -> None:
        self.findings.append(Finding(self.name, prop, PASS if ok else FAIL, "" if ok else detail))

    def check(self, prop: str, fn: Callable[[], tuple[bool, str] | bool]) -> None:
        try:
            out = fn()
        except MarketError as exc:
            self.findings.append(Finding(self.name, prop, FAIL, f"{type(exc).__name__}: {exc}"))
            return
        ok, detail = out if isinstance(out, tuple) else (out, "")
        self.record(prop, ok, detail)


def run_battery(market: Market, name: str) -> list[Finding]:
    """Run every property on one market; never raises for a failed property."""
    run = _Run(name)
    fmt = lambda mu: format_matching(market, mu)  # noqa: E731

    substitutable = [is_substitutable(market, f) for f in range(market.n_firms)]
    lad = [satisfies_lad(market, f) for f in range(market.n_firms)]
    for f, verdict in enumerate(substitutable):
        detail = "" if verdict else market.describe_witness(verdict.witness)
        run.findings.append(
            Finding(name, f"axiom substitutable {market.firms[f]}", PASS if verdict else FAIL, detail)
        )
    if not all(substitutable):
        run.findings.append(Finding(name, "lattice properties", SKIP, "market not substitutable"))
        return run.findings

    run.check("choice subset and idempotent", lambda: _choice_laws(market))
    run.check(
        "choice consistency",
        lambda: all(check_choice_consistency(market, f) for f in range(market.n_firms)),
    )

    lat = enumerate_wqs(market)
    elements = list(lat.elements)
    stables = [mu for mu in elements if is_stable(market, mu)]
    run.findings.append(Finding(name, "size", NOTE, f"|WQS|={len(lat)} |S|={len(stables)}"))

    # oracle equivalence
    run.check("oracle WQS set", lambda: oracle.oracle_wqs(market) == elements)
    run.check("oracle stable set", lambda: oracle.oracle_stable(market) == stables)
    oracle_geq = _oracle_relation(market, elements)
    run.check("oracle Blair relation", lambda: bool((oracle_geq == lat.geq).all()))
    joins = join_table(lat)
    run.check("oracle join", lambda: _oracle_joins(lat, oracle_geq, joins))
    run.check(
        "oracle operator",
        lambda: all(oracle.oracle_step(market, mu) == apply_T(market, mu).after for mu in elements),
    )

    # matchings
    run.check("empty matching is WQS", lambda: empty_matching(market) in lat)
    run.check("stable subset of WQS", lambda: all(is_worker_quasi_stable(market, mu) for mu in stables))
    run.check(
        "WQS blockers are unemployed",
        lambda: all(mu.worker_side[p.worker] is None for mu in elements for p in blocking_pairs(market, mu)),
    )

    # lattice
    n = len(lat)
    g = lat.geq
    run.check("Blair reflexive", lambda: bool(np.diag(g).all()))
    run.check("Blair antisymmetric", lambda: not bool((g & g.T & ~np.eye(n, dtype=bool)).any()))
    gi = g.astype(np.int64)
    run.check("Blair transitive", lambda: not bool(((gi @ gi) > 0)[~g].any()))
    run.check("covers are the transitive reduction", lambda: list(lat.covers) == cover_pairs(g))
    run.check("join is an upper bound", lambda: _join_upper(lat, joins))
    run.check("join idempotent", lambda: bool((np.diag(joins) == np.arange(n)).all()))
    run.check("join commutative", lambda: bool((joins == joins.T).all()))
    run.check("join associative", lambda: all((joins[joins[i]] == joins[i][joins]).all() for i in range(n)))
    meets = np.array([[meet_index(lat, i, j) for j in range(n)] for i in range(n)], dtype=np.int64)
    run.check(
        "absorption",
        lambda: all(
            meets[i, joins[i, j]] == i and joins[i, meets[i, j]] == i for i in range(n) for j in range(n)
        ),
    )
    run.check("maximal elements are stable", lambda: all(is_stable(market, elements[i]) for i in lat.maximal()))
    top = elements[lat.top]
    run.findings.append(Finding(name, "top is stable", NOTE, "yes" if is_stable(market, top) else "no"))

    # operator
    t = t_table(lat)
    images = [elements[k] for k in t]
    run.check("T maps WQS to WQS", lambda: all(is_worker_quasi_stable(market, mu) for mu in images))
    run.check("T is Blair improving", lambda: all(g[t[i], i] for i in range(n)))
    # the strict version is not a stated result: report counterexamples, never fail on them
    stuck = [fmt(elements[i]) for i in range(n) if t[i] == i and not is_stable(market, elements[i])]
    run.findings.append(
        Finding(name, "T strictly improves unstable matchings", NOTE, "yes" if not stuck else "no: " + " ".join(stuck))
    )
    run.check(
        "fixed points equal stable set",
        lambda: (fixed_points(market, lat) == stables and bool(stables), f"{len(stables)} stable"),
    )
    run.check("T isotone", lambda: _verdict(check_isotone(market, lat), fmt))
    run.check("stabilization", lambda: _stabilization(market, lat))
    run.check("stable set is a lattice", lambda: _stable_sublattice(lat, stables))
    run.check("worker-optimal stable exists", lambda: worker_optimal_stable(market, lat) in stables)

    if not all(lad):
        # without LAD nothing is claimed about F; record how often the LAD formula still holds
        best = elements.index(worker_optimal_stable(market, lat))
        hits = sum(
            stabilize(market, mu, lattice=lat).fixed_point == elements[joins[i, best]]
            for i, mu in enumerate(elements)
        )
        run.findings.append(
            Finding(name, "fixed point vs join with worker-optimal", NOTE, f"equal on {hits}/{n} elements")
        )
        bad = next(f for f, v in enumerate(lad) if not v)
        run.findings.append(
            Finding(
                name,
                "LAD results",
                SKIP,
                f"{market.firms[bad]} violates LAD {market.describe_witness(lad[bad].witness)}",
            )
        )
        return run.findings
    run.check("join with stable is stable", lambda: _verdict(check_join_with_stable(market, lat), fmt))
    run.check("fixed point is join with worker-optimal", lambda: _verdict(check_fixed_point_formula(market, lat), fmt))
    run.check("hire bound, domination, rural hospitals", lambda: _verdict(check_corollaries(market, lat), fmt))
    run.check(
        "hires grow each round",
        lambda: all(
            a.bit_count() >= b.bit_count()
            for mu in elements
            for a, b in zip(images[lat.index(mu)].firm_side, mu.firm_side)
        ),
    )
    return run.findings


def _verdict(verdict, fmt) -> tuple[bool, str]:
    if verdict:
        return True, ""
    parts = [fmt(x) if hasattr(x, "firm_side") else str(x) for x in verdict.witness]
    return False, "witness " + " ".join(parts)


def _choice_laws(market: Market) -> bool:
    for f in range(market.n_firms):
        ch = market.choice_table(f)
        for s, c in enumerate(ch):
            if c & ~s or ch[c] != c:
                return False
    return True


def _oracle_relation(market: Market, elements) -> np.ndarray:
    view = oracle._View(market)
    assigned = [view.to_assignment(mu) for mu in elements]
    return np.array([[view.dominates(a, b) for b in assigned] for a in assigned], dtype=bool)


def _oracle_joins(lat: WqsLattice, geq: np.ndarray, joins: np.ndarray) -> tuple[bool, str]:
    """Least upper bound by search over an independently computed relation."""
    n = len(lat)
    for i in range(n):
        for j in range(i, n):
            upper = np.nonzero(geq[:, i] & geq[:, j])[0]
            least = [k for k in upper if geq[upper, k].all()]
            if least != [joins[i, j]]:
                fmt = lambda k: format_matching(lat.market, lat.elements[k])  # noqa: E731
                return False, f"{fmt(i)} v {fmt(j)}"
    return True, ""


def _join_upper(lat: WqsLattice, joins: np.ndarray) -> bool:
    n = len(lat)
    rows = np.arange(n)
    return bool(lat.geq[joins, rows[:, None]].all() and lat.geq[joins, rows[None, :]].all())


def _stabilization(market: Market, lat: WqsLattice) -> tuple[bool, str]:
    for mu in lat.elements:
        trace = stabilize(market, mu, lattice=lat)
        path = [mu] + [r.after for r in trace.rounds]
        if not is_stable(market, trace.fixed_point) or len(trace.rounds) > len(lat):
            return False, f"from {format_matching(market, mu)}"
        for r, (a, b) in zip(trace.rounds, zip(path, path[1:])):
            if r.before != a or r.after != b or a == b or not blair_geq(market, b, a):
                return False, f"trace from {format_matching(market, mu)}"
        if oracle.oracle_fixed_point(market, mu) != trace.fixed_point:
            return False, f"oracle disagrees from {format_matching(market, mu)}"
    return True, ""


def _stable_sublattice(lat: WqsLattice, stables) -> bool:
    idx = [lat.index(mu) for mu in stables]
    sub = lat.geq[np.ix_(idx, idx)]
    k = len(idx)
    if k == 0:
        return False
    if sum(sub[i].all() for i in range(k)) != 1 or sum(sub[:, i].all() for i in range(k)) != 1:
        return False
    for a in range(k):
        for b in range(k):
            upper = np.nonzero(sub[:, a] & sub[:, b])[0]
            if sum(sub[upper, c].all() for c in upper) != 1:
                return False
    return True


def failures(findings: list[Finding]) -> list[Finding]:
    return [f for f in findings if f.status == FAIL]
