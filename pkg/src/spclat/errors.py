"""Exception hierarchy.

``InvalidInput`` subclasses signal malformed structures (CLI exit 1);
``Undecided`` subclasses signal a bounded search that could not finish
honestly (CLI exit 2).
"""

from __future__ import annotations


class SpclatError(Exception):
    pass


class InvalidInput(SpclatError):
    pass


class CycleDetected(InvalidInput):
    def __init__(self, a, b):
        super().__init__(f"cycle: {a!r} <= {b!r} <= {a!r}")
        self.pair = (a, b)


class NoJoin(InvalidInput):
    def __init__(self, a, b):
        super().__init__(f"no least upper bound for {a!r}, {b!r}")
        self.pair = (a, b)


class NoBottom(InvalidInput):
    pass


class NotALattice(InvalidInput):
    pass


class NotDistributive(InvalidInput):
    def __init__(self, triple):
        super().__init__(f"distributive law fails at {triple!r}")
        self.triple = triple


class NotAMorphism(InvalidInput):
    pass


class NotPointed(InvalidInput):
    pass


class NotInCone(InvalidInput):
    pass


class NotSaturated(InvalidInput):
    pass


class JoinsMissing(InvalidInput):
    """The positive cone lacks a join needed by a theorem constructor."""


class JoinError(SpclatError):
    pass


class JoinNotFound(JoinError):
    pass


class JoinNotUnique(JoinError):
    def __init__(self, a, b, minimal):
        super().__init__(f"{a!r} and {b!r} have incomparable minimal upper bounds {minimal!r}")
        self.minimal = minimal


class Undecided(SpclatError):
    pass


class Inconclusive(Undecided):
    def __init__(self, query: str):
        super().__init__(f"inconclusive at configured bound: {query}")
        self.query = query


class SizeGuard(Undecided):
    pass


class CapacityExceeded(Undecided):
    pass
