"""Exception types shared across the package.

Everything raised by the library derives from :class:`ArbxError`, so callers
(and the CLI) can catch one base class. Most errors double as ``ValueError``
because they signal rejected input rather than internal failure.
"""


class ArbxError(Exception):
    """Base class for all library errors."""


class GraphIndexError(ArbxError, IndexError):
    """A vertex index lies outside 1..n."""


class DuplicateEdgeError(ArbxError, ValueError):
    """The same undirected edge was supplied twice under strict construction."""


class NotConnectedError(ArbxError, ValueError):
    """An operation that needs a connected graph received a disconnected one."""


class TreeMismatchError(ArbxError, ValueError):
    """The supplied spanning tree does not belong to the graph."""


class OracleSizeError(ArbxError, ValueError):
    """The graph exceeds the vertex cap of a brute-force routine."""


class BadParamsError(ArbxError, ValueError):
    """A parameter is out of its valid range or of the wrong shape."""


class NotAWalkError(ArbxError, ValueError):
    """A vertex sequence steps over a pair that is not an edge."""


class NotClosedError(ArbxError, ValueError):
    """A walk does not end at its starting vertex."""


class NotCompleteError(ArbxError, ValueError):
    """An operation restricted to complete graphs received something sparser."""


class NotAnEdgeError(ArbxError, ValueError):
    """An entry coordinate does not correspond to an edge of the graph."""


class NotABasisError(ArbxError, ValueError):
    """The given entry coordinates do not minimally determine a matrix."""


class NotArbitrageFreeError(ArbxError, ValueError):
    """A matrix required to be arbitrage-free fails the check."""


class LengthMismatchError(ArbxError, ValueError):
    """A value sequence does not match the expected length."""


class SpecMismatchError(ArbxError, ValueError):
    """A perturbation and an operator were built over different bases."""


class GraphMismatchError(ArbxError, ValueError):
    """Two matrices expected to share a graph do not."""


class ParseError(ArbxError, ValueError):
    """An input file is malformed."""


class ReciprocalConflictError(ArbxError, ValueError):
    """Both directions of a pair are quoted but their product strays from 1."""
