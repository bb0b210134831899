from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Violation:
    """One violated constraint: its family, the index it is attached to, and the offending value."""

    kind: str
    index: int | tuple[int, ...]
    value: float

    def __str__(self):
        return f"{self.kind} {self.index}: {self.value:g}"


@dataclass(frozen=True)
class Infeasible:
    """Returned by decoders instead of a solution when a state breaks constraints."""

    violations: tuple[Violation, ...]

    def __bool__(self):
        return False

    def __len__(self):
        return len(self.violations)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}
