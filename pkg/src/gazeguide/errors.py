"""Exception hierarchy shared across the engine and the service layer."""


class GazeGuideError(Exception):
    """Base class for all engine errors."""


class ParseError(GazeGuideError):
    """Scenario document is not well-formed."""


class ValidationError(GazeGuideError):
    """A value violates a declared invariant; message names the first violation."""


class GridTooSmall(GazeGuideError):
    """Saliency grid below the 8x8 minimum."""


class NonPositiveSigma(GazeGuideError):
    """Gaussian width must be strictly positive."""


class UnorderedSamples(GazeGuideError):
    """Gaze sample timestamps decreased within a stream."""


class TooManyWaypoints(GazeGuideError):
    """Exact trajectory planning is capped; raise k upstream filtering instead."""


class ClockRegression(GazeGuideError):
    """Tick time went backwards."""


class SceneNotFound(GazeGuideError):
    """Unknown scene id."""


class CapacityExceeded(GazeGuideError):
    """Server session limit reached."""


class SessionClosed(GazeGuideError):
    """Operation on a session that already ended."""


class MalformedMessage(GazeGuideError):
    """Wire message failed validation; the session stays open."""
