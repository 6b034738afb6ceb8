"""Exception hierarchy shared by all modules."""


class CrCanonError(Exception):
    pass


class GraphError(CrCanonError, ValueError):
    pass


class RejectLoop(GraphError):
    pass


class RejectRange(GraphError):
    pass


class ParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CountMismatch(GraphError):
    pass


class PureCycleComponent(GraphError):
    """A component of the core has no vertex of degree >= 3."""


class NotATree(GraphError):
    pass


class NotUnicyclic(GraphError):
    pass


class TooLarge(CrCanonError):
    """Exact search would exceed its configured bound."""


class BadLambda(CrCanonError, ValueError):
    pass


class OddSum(CrCanonError, ValueError):
    pass


class RunawayTree(CrCanonError):
    pass
