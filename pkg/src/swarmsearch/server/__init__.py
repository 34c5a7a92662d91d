"""Real-time operator session service: rounds, persistence, wire protocol."""

from .protocol import OperatorInput, ProtocolError, snapshot_message
from .rounds import InputLogEntry, RoundEngine, RoundOutcome, RoundSpec, run_round_offline
from .store import RatingError, RatingRecord, SessionStore
from .teams import TeamCatalog, TeamEntry

__all__ = [
    "InputLogEntry",
    "OperatorInput",
    "ProtocolError",
    "RatingError",
    "RatingRecord",
    "RoundEngine",
    "RoundOutcome",
    "RoundSpec",
    "SessionStore",
    "TeamCatalog",
    "TeamEntry",
    "run_round_offline",
    "snapshot_message",
]
