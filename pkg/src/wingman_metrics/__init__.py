"""Social-navigation metrics for autonomous wingman / human pilot encounters.

Naturalness (M1-M3) is the mean squared velocity, acceleration and jerk of
the wingman. Comfort is the minimum separation (M4) and the number of
collision-risk frames (M5).
"""

from .differentiation import DerivativeSeries, differentiate
from .errors import (
    ConfigError,
    DuplicateTimestamp,
    EmptyOverlap,
    GapTooLarge,
    GridMismatch,
    InvalidSpec,
    IrregularDt,
    NoClosedForm,
    NonFinite,
    NonMonotonicTime,
    ParseError,
    TooShort,
    UnknownAgent,
    WingmanMetricsError,
)
from .ingest import IngestOptions, RawLogRecord, format_log, load_encounter, parse_log, resample
from .metrics import collision_risk, evaluate, min_distance, naturalness
from .model import (
    AlertEvent,
    AlertReason,
    Encounter,
    FrameDiagnostics,
    MetricConfig,
    MetricReport,
    NaturalnessThresholds,
    Role,
    Scheme,
    Trajectory,
    TrajectorySample,
    m_to_nm,
    nm_to_m,
    validate_encounter,
)
from .scenarios import Expectation, ScenarioKind, ScenarioSpec, expectation, generate
from .streaming import StreamState, stream_finalize, stream_new, stream_push

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
