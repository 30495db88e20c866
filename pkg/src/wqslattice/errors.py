"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MarketError(Exception):
    """Base class for all errors raised by wqslattice."""


class ParseError(MarketError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class BudgetExceeded(MarketError):
    def __init__(self, what: str, needed: int, budget: int):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} steps, budget is {budget}")


class AxiomViolation(MarketError):
    """A firm fails a preference axiom that an operation depends on."""

    axiom = "axiom"

    def __init__(self, firm: str, witness):
        self.firm = firm
        self.witness = witness
        super().__init__(f"{self.axiom} violated by {firm}: witness {witness}")


class SubstitutabilityViolation(AxiomViolation):
    axiom = "substitutability"


class LadViolation(AxiomViolation):
    axiom = "law of aggregate demand"


class OverlapError(MarketError):
    def __init__(self, worker: str):
        self.worker = worker
        super().__init__(f"worker {worker} is assigned to more than one firm")


class NotWorkerQuasiStable(MarketError):
    def __init__(self, matching: str):
        self.matching = matching
        super().__init__(f"matching {matching} is not worker-quasi-stable")


class NotInLattice(MarketError):
    def __init__(self, matching: str):
        self.matching = matching
        super().__init__(f"matching {matching} is not an element of the lattice")


class RoundCapExceeded(MarketError):
    """Stabilization did not reach a fixed point; always a bug."""


class NoUnanimousOptimum(MarketError):
    """No stable matching is weakly preferred by every worker."""


class NoUniqueBound(MarketError):
    """A bound that the lattice structure guarantees to be unique was not."""


class GenerationExhausted(MarketError):
    """Rejection sampling gave up before finding an admissible market."""
