"""Exception types shared across the package."""

from __future__ import annotations


class InvariantError(ValueError):
    """A data invariant failed. ``witness`` pins down where."""

    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message)
        self.message = message
        self.witness = witness or {}

    def to_dict(self) -> dict:
        return {"violated": self.message, "witness": self.witness}

    def __str__(self) -> str:
        if self.witness:
            return f"{self.message} (witness: {self.witness})"
        return self.message


class LevelExhausted(InvariantError):
    """A torsion-level search ran past its configured bound."""
