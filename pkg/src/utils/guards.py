import os
import logging

logger = logging.getLogger(__name__)

# Desk-range defaults. CREMONA_DESK_GUARD scales the vertex cap and
# raises every dimension cap by (factor - 1). May be slow.
DEFAULT_LIMITS = {
    "volume_vertices": 200,
    "minors_n": 6,
    "refinement_n": 4,
    "covering_n": 3,
    "polarization_n": 20,
}


class DeskGuardError(ValueError):
    """Raised when an input falls outside the configured desk range."""

    def __init__(self, guard: str, limit: int, value: int, message: str = None):
        self.guard = guard
        self.limit = limit
        self.value = value
        text = message or f"{guard} guard exceeded"
        super().__init__(f"{text} (guard {guard}: {value} > {limit})")


class DeskGuard:
    """
    Reads the desk-range guard configuration from the environment.

    The environment is read on construction, so a fresh instance picks up
    changes made after import (tests rely on this).

    Raises:
        ValueError: If CREMONA_DESK_GUARD is set but is not a positive integer.
    """

    def __init__(self, factor: str = None):
        raw = factor if factor is not None else os.getenv("CREMONA_DESK_GUARD")
        if raw is None or str(raw).strip() == "":
            self.factor = 1
        else:
            try:
                self.factor = int(str(raw).strip())
            except ValueError:
                raise ValueError(f"CREMONA_DESK_GUARD must be a positive integer (got {raw!r}).")
            if self.factor < 1:
                raise ValueError(f"CREMONA_DESK_GUARD must be a positive integer (got {raw!r}).")
        if self.factor > 1:
            logger.warning(f"Desk guards raised by factor {self.factor}; large inputs may be slow.")

    def limit(self, guard: str) -> int:
        if guard not in DEFAULT_LIMITS:
            raise ValueError(f"Unknown guard: {guard}")
        base = DEFAULT_LIMITS[guard]
        if guard == "volume_vertices":
            return base * self.factor
        return base + (self.factor - 1)

    def check(self, guard: str, value: int, message: str = None) -> None:
        limit = self.limit(guard)
        if value > limit:
            raise DeskGuardError(guard, limit, value, message)
