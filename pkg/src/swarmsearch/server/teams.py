"""Team catalog: named parameter configurations grouped into the four
warmth/competence quadrants, and study-plan sampling from them."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..config import BehaviorParams, SwarmConfig
from ..rng import derive_seed
from .rounds import RoundSpec

GROUP_LABELS = (
    "HighWarmth_HighCompetence",
    "LowWarmth_HighCompetence",
    "HighWarmth_LowCompetence",
    "LowWarmth_LowCompetence",
)


@dataclass(frozen=True)
class TeamEntry:
    config_id: str
    speed: float
    separation: float
    broadcast: float
    group_label: str

    @property
    def params(self) -> BehaviorParams:
        return BehaviorParams(
            speed=self.speed, separation=self.separation, broadcast=self.broadcast
        )


class TeamCatalog:
    def __init__(self, entries: list[TeamEntry]) -> None:
        if not entries:
            raise ValueError("team catalog is empty")
        self.entries = entries

    @classmethod
    def load(cls, path: str | Path) -> "TeamCatalog":
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        entries = [
            TeamEntry(
                config_id=item["config_id"],
                speed=float(item["speed"]),
                separation=float(item["separation"]),
                broadcast=float(item["broadcast"]),
                group_label=item["group_label"],
            )
            for item in raw
        ]
        return cls(entries)

    def groups(self) -> dict[str, list[TeamEntry]]:
        grouped: dict[str, list[TeamEntry]] = {}
        for entry in self.entries:
            grouped.setdefault(entry.group_label, []).append(entry)
        return grouped

    def sample_study_plan(
        self,
        seed: int,
        rounds_per_group: int = 5,
        time_limit_s: float = 60.0,
        human_robot_id: int = 0,
    ) -> list[RoundSpec]:
        """Draw rounds_per_group teams from each group and shuffle the round order."""
        rng = np.random.default_rng(seed)
        grouped = self.groups()
        chosen: list[TeamEntry] = []
        for label in GROUP_LABELS:
            pool = grouped.get(label, [])
            if len(pool) < rounds_per_group:
                raise ValueError(
                    f"group {label!r} has {len(pool)} teams, need {rounds_per_group}"
                )
            picks = rng.choice(len(pool), size=rounds_per_group, replace=False)
            chosen.extend(pool[int(i)] for i in picks)
        order = rng.permutation(len(chosen))

        plan = []
        for round_index, pick in enumerate(order, start=1):
            team = chosen[int(pick)]
            plan.append(
                RoundSpec(
                    round_index=round_index,
                    human_robot_id=human_robot_id,
                    time_limit_s=time_limit_s,
                    config=SwarmConfig(
                        params=team.params,
                        seed=derive_seed(seed, round_index),
                        max_trial_duration=max(time_limit_s, 60.0),
                    ),
                )
            )
        return plan
