from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ValidationReport:
    """Violations found by a validator.  Falsy when there are no errors;
    warnings never make a report falsy."""
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return bool(self.errors)

    def __len__(self) -> int:
        return len(self.errors)

    def __iter__(self):
        return iter(self.errors)

    @property
    def ok(self) -> bool:
        return not self.errors
