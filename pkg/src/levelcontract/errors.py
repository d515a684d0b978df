"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class LevelContractError(Exception):
    """Base class for every error raised by this package."""


class StructuralError(LevelContractError, ValueError):
    """A graph is not even structurally well formed (dangling ids, duplicates)."""


class DisconnectedGraph(LevelContractError):
    pass


class UnknownLevel(LevelContractError, KeyError):
    def __init__(self, level: int):
        super().__init__(level)
        self.level = level

    def __str__(self) -> str:
        return f"unknown level {self.level}"


class UnknownVertex(LevelContractError, KeyError):
    def __init__(self, vertex: str):
        super().__init__(vertex)
        self.vertex = vertex

    def __str__(self) -> str:
        return f"unknown vertex {self.vertex!r}"


class InvalidInput(LevelContractError):
    """Raised by operations whose precondition is a valid level graph."""

    def __init__(self, report):
        self.report = report
        codes = ", ".join(sorted({v.code for v in report.violations}))
        super().__init__(f"graph fails validation ({codes})")


class MarkedPoleAbove(LevelContractError):
    def __init__(self, marking: str, level: int):
        self.marking = marking
        self.level = level
        super().__init__(f"marked pole {marking!r} lies strictly above level {level}")


class LongEdgeCrossing(LevelContractError):
    def __init__(self, edges, level: int):
        self.edges = tuple(edges)
        self.level = level
        super().__init__(
            f"edges {', '.join(self.edges)} cross level {level}; run the semistable modification first"
        )


class NotContractible(LevelContractError):
    def __init__(self, obstructions):
        self.obstructions = list(obstructions)
        text = "; ".join(f"{o.code}({o.location})" for o in self.obstructions)
        super().__init__(f"not contractible: {text}")


class InternalInvariantViolation(LevelContractError, AssertionError):
    """An identity that holds for every valid input failed. Always a bug."""


class OddSignatureSum(LevelContractError, ValueError):
    def __init__(self, mu):
        self.mu = tuple(mu)
        super().__init__(f"signature {self.mu} has odd sum {sum(self.mu)}")


class MissingResidue(LevelContractError, KeyError):
    def __init__(self, locus: str):
        super().__init__(locus)
        self.locus = locus

    def __str__(self) -> str:
        return f"no residue supplied for polar locus {self.locus!r}"


class UnknownLocus(LevelContractError, KeyError):
    def __init__(self, locus: str):
        super().__init__(locus)
        self.locus = locus

    def __str__(self) -> str:
        return f"residue supplied for {self.locus!r}, which is not a polar locus"


class SimplePoleZeroResidue(LevelContractError, ValueError):
    def __init__(self, marking: str):
        self.marking = marking
        super().__init__(f"simple pole {marking!r} must have a nonzero residue")


class MarkedPolesPresent(LevelContractError, ValueError):
    def __init__(self, markings):
        self.markings = tuple(markings)
        super().__init__(
            "the residue solution space is only defined without marked poles; found "
            + ", ".join(self.markings)
        )
