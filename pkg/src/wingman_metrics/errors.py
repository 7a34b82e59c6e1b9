"""Exception types raised across the package."""


class WingmanMetricsError(Exception):
    """Base class for every error raised by wingman_metrics."""


class GridMismatch(WingmanMetricsError, ValueError):
    pass


class TooShort(WingmanMetricsError, ValueError):
    def __init__(self, message: str, needed: int | None = None, got: int | None = None):
        super().__init__(message)
        self.needed = needed
        self.got = got


class NonFinite(WingmanMetricsError, ValueError):
    pass


class ParseError(WingmanMetricsError, ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DuplicateTimestamp(WingmanMetricsError, ValueError):
    def __init__(self, agent: str, t: float):
        super().__init__(f"agent {agent!r}: duplicate timestamp t={t}")
        self.agent = agent
        self.t = t


class NonMonotonicTime(WingmanMetricsError, ValueError):
    def __init__(self, agent: str, t: float):
        super().__init__(f"agent {agent!r}: non-monotonic timestamp t={t}")
        self.agent = agent
        self.t = t


class GapTooLarge(WingmanMetricsError, ValueError):
    def __init__(self, agent: str, t: float, gap: float):
        super().__init__(f"agent {agent!r}: gap of {gap:g} s after t={t}")
        self.agent = agent
        self.t = t
        self.gap = gap


class EmptyOverlap(WingmanMetricsError, ValueError):
    pass


class IrregularDt(WingmanMetricsError, ValueError):
    def __init__(self, expected: float, got: float):
        super().__init__(f"irregular sample spacing: expected dt={expected!r}, got {got!r}")
        self.expected = expected
        self.got = got


class InvalidSpec(WingmanMetricsError, ValueError):
    pass


class NoClosedForm(WingmanMetricsError):
    pass


class ConfigError(WingmanMetricsError, ValueError):
    pass


class UnknownAgent(WingmanMetricsError, LookupError):
    def __init__(self, agents):
        self.agents = list(agents)
        super().__init__(f"agent id(s) not found in log: {', '.join(self.agents)}")

    def __str__(self):
        return self.args[0]
