"""Durable session state: plans, round outcomes, input logs, ratings.

Plain append-only JSONL files per session, no database. Layout under the
data directory:

    sessions/<id>/session.json     round plan, created_at
    sessions/<id>/outcomes.jsonl   one row per round attempt (completed or aborted)
    sessions/<id>/inputs.jsonl     one row per attempt with the full input log
    sessions/<id>/ratings.jsonl    one row per rated round
"""

from __future__ import annotations

import json
import uuid
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from .rounds import InputLogEntry, RoundOutcome, RoundSpec

RATING_SCALE = range(1, 8)  # 7-point Likert


class RatingError(ValueError):
    def __init__(self, code: str, text: str) -> None:
        super().__init__(text)
        self.code = code
        self.text = text


@dataclass(frozen=True)
class RatingRecord:
    session_id: str
    round_index: int
    config_id: str
    warmth: int
    competence: int
    joint_effort: int
    submitted_at: str

    def __post_init__(self) -> None:
        for name in ("warmth", "competence", "joint_effort"):
            value = getattr(self, name)
            if not isinstance(value, int) or value not in RATING_SCALE:
                raise RatingError("rating_out_of_range", f"{name} must be an integer in 1..7")


class UnknownSessionError(KeyError):
    pass


class SessionStore:
    def __init__(self, data_dir: str | Path) -> None:
        self.root = Path(data_dir)
        self.sessions_dir = self.root / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    def _dir(self, session_id: str) -> Path:
        d = self.sessions_dir / session_id
        if not d.exists():
            raise UnknownSessionError(session_id)
        return d

    @staticmethod
    def _append(path: Path, row: dict) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")

    @staticmethod
    def _rows(path: Path) -> list[dict]:
        if not path.exists():
            return []
        with open(path, encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    # -- sessions ----------------------------------------------------------

    def create_session(self, plan: list[RoundSpec]) -> str:
        if not plan:
            raise ValueError("round plan must not be empty")
        indices = [spec.round_index for spec in plan]
        if indices != list(range(1, len(plan) + 1)):
            raise ValueError("round plan must be numbered 1..n in order")
        session_id = uuid.uuid4().hex[:12]
        d = self.sessions_dir / session_id
        d.mkdir()
        payload = {
            "session_id": session_id,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "rounds": [spec.to_json() for spec in plan],
        }
        (d / "session.json").write_text(json.dumps(payload, indent=2), encoding="utf-8")
        return session_id

    def load_plan(self, session_id: str) -> list[RoundSpec]:
        d = self._dir(session_id)
        payload = json.loads((d / "session.json").read_text(encoding="utf-8"))
        return [RoundSpec.from_json(item) for item in payload["rounds"]]

    # -- outcomes and input logs --------------------------------------------

    def record_outcome(
        self,
        session_id: str,
        attempt: int,
        seed: int,
        outcome: RoundOutcome,
        status: str,
        jitter_ms_mean: float | None = None,
        jitter_ms_max: float | None = None,
    ) -> None:
        d = self._dir(session_id)
        self._append(
            d / "outcomes.jsonl",
            {
                "round_index": outcome.round_index,
                "attempt": attempt,
                "seed": seed,
                "status": status,
                "success": outcome.success,
                "completion_s": outcome.completion_s,
                "snapshot_count": outcome.snapshot_count,
                "jitter_ms_mean": jitter_ms_mean,
                "jitter_ms_max": jitter_ms_max,
            },
        )
        self._append(
            d / "inputs.jsonl",
            {
                "round_index": outcome.round_index,
                "attempt": attempt,
                "seed": seed,
                "entries": [entry.to_json() for entry in outcome.input_log],
            },
        )

    def outcomes(self, session_id: str) -> list[dict]:
        return self._rows(self._dir(session_id) / "outcomes.jsonl")

    def input_logs(self, session_id: str) -> list[dict]:
        return self._rows(self._dir(session_id) / "inputs.jsonl")

    def load_input_log(self, session_id: str, round_index: int, attempt: int) -> list[InputLogEntry]:
        for row in self.input_logs(session_id):
            if row["round_index"] == round_index and row["attempt"] == attempt:
                return [InputLogEntry.from_json(e) for e in row["entries"]]
        raise KeyError((round_index, attempt))

    def attempt_count(self, session_id: str, round_index: int) -> int:
        return sum(1 for row in self.outcomes(session_id) if row["round_index"] == round_index)

    def round_finished(self, session_id: str, round_index: int) -> bool:
        return any(
            row["round_index"] == round_index and row["status"] == "completed"
            for row in self.outcomes(session_id)
        )

    # -- ratings -------------------------------------------------------------

    def ratings(self, session_id: str) -> list[dict]:
        return self._rows(self._dir(session_id) / "ratings.jsonl")

    def rated_rounds(self, session_id: str) -> set[int]:
        return {row["round_index"] for row in self.ratings(session_id)}

    def record_rating(self, record: RatingRecord) -> None:
        """Append a rating; a round may be rated once, and only after it finished."""
        d = self._dir(record.session_id)
        if not self.round_finished(record.session_id, record.round_index):
            raise RatingError("rating_wrong_round", "that round has not finished")
        if record.round_index in self.rated_rounds(record.session_id):
            raise RatingError("rating_duplicate", "that round was already rated")
        self._append(d / "ratings.jsonl", asdict(record))

    def next_unrated_round(self, session_id: str, plan: list[RoundSpec]) -> int | None:
        """The round the session should serve next; None when the plan is done."""
        rated = self.rated_rounds(session_id)
        for spec in plan:
            if spec.round_index not in rated:
                return spec.round_index
        return None

    # -- export ---------------------------------------------------------------

    def export(self, session_id: str) -> dict:
        d = self._dir(session_id)
        payload = json.loads((d / "session.json").read_text(encoding="utf-8"))
        return {
            "session_id": session_id,
            "created_at": payload["created_at"],
            "rounds": payload["rounds"],
            "outcomes": self.outcomes(session_id),
            "ratings": self.ratings(session_id),
            "input_logs": self.input_logs(session_id),
        }
