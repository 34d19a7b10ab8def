"""Qubit labels."""
from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from enum import Enum


class QubitRole(str, Enum):
    ROOT = "root"
    LEAF = "leaf"
    EPR_HALF = "epr_half"
    CONNECTOR = "connector"


@dataclass(frozen=True)
class QubitId:
    label: str
    role: QubitRole = QubitRole.EPR_HALF
    birth: int = 0

    def __str__(self) -> str:
        return self.label

    def renamed(self, role: QubitRole, birth: int | None = None) -> QubitId:
        """Same label, new role (e.g. an EPR half promoted to a leaf)."""
        return QubitId(self.label, role, self.birth if birth is None else birth)


_PREFIX = {
    QubitRole.ROOT: "r",
    QubitRole.LEAF: "l",
    QubitRole.EPR_HALF: "e",
    QubitRole.CONNECTOR: "c",
}


class QubitFactory:
    """Hands out fresh, process-unique labels."""

    def __init__(self, namespace: str = "") -> None:
        self.namespace = namespace
        self._counter = itertools.count()
        self._lock = threading.Lock()

    def fresh(self, role: QubitRole, birth: int = 0) -> QubitId:
        with self._lock:
            n = next(self._counter)
        return QubitId(f"{self.namespace}{_PREFIX[role]}{n}", role, birth)


default_factory = QubitFactory()
