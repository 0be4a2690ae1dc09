"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: context/search_context.py
Description:
    Shared state ("blackboard") of one extremal search.

    The search tree is cut at a fixed depth into independent tasks. Each task
    reports a TaskOutcome here; the context merges them in task order, so the
    merged optimum, witness and node total never depend on how many workers ran.
    A snapshot of the whole run can be dumped for debugging.
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, field
from datetime import datetime

logger = logging.getLogger("SearchContext")


@dataclass
class TaskOutcome:
    """What one subtree search produced."""

    index: int
    best_value: int
    best_edges: list[int] | None
    nodes: int
    exhausted: bool = False


@dataclass
class SearchContext:
    """
    Accumulates the seed incumbent, the prefix phase and every task outcome.

    Args:
        command: CLI command the search serves ("ex", "ex-cliques", "ex-copies").
        instance_key: Canonical hash of the instance.
        parameters: Human-readable instance parameters (for logs and the cache).
    """

    command: str
    instance_key: str
    parameters: dict
    seed_value: int = 0
    seed_edges: list[int] = field(default_factory=list)
    prefix_nodes: int = 0
    outcomes: list[TaskOutcome] = field(default_factory=list)

    def record_seed(self, value: int, edges: list[int], prefix_nodes: int) -> None:
        self.seed_value = value
        self.seed_edges = list(edges)
        self.prefix_nodes = prefix_nodes
        logger.info(f"[{self.command}] seed incumbent {value}, {prefix_nodes} prefix nodes")

    def add_outcome(self, outcome: TaskOutcome) -> None:
        self.outcomes.append(outcome)

    # ==========================================
    # Merging
    # ==========================================

    @property
    def nodes(self) -> int:
        return self.prefix_nodes + sum(o.nodes for o in self.outcomes)

    @property
    def exhausted(self) -> bool:
        return any(o.exhausted for o in self.outcomes)

    def best(self) -> tuple[int, list[int]]:
        """Largest value; ties go to the earliest task, then to the seed."""
        value, edges = self.seed_value, self.seed_edges
        for outcome in sorted(self.outcomes, key=lambda o: o.index):
            if outcome.best_edges is not None and outcome.best_value > value:
                value, edges = outcome.best_value, outcome.best_edges
        return value, list(edges)

    def snapshot(self) -> dict:
        value, edges = self.best()
        return {
            "command": self.command,
            "instance_key": self.instance_key,
            "parameters": self.parameters,
            "seed_value": self.seed_value,
            "optimum": value,
            "witness_masks": edges,
            "nodes": self.nodes,
            "exhausted": self.exhausted,
            "tasks": [asdict(o) for o in self.outcomes],
        }

    def save_snapshot(self, directory: str) -> str:
        """[Debug] Dump the merged state as JSON and return the file path."""
        os.makedirs(directory, exist_ok=True)
        stamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        path = os.path.join(directory, f"search_{self.command}_{self.instance_key[:12]}_{stamp}.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.snapshot(), f, indent=2, sort_keys=True)
        logger.info(f"Search snapshot written to {path}")
        return path
