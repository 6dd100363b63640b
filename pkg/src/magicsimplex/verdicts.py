"""Classification verdicts shared across the package.

``Undetermined`` is a first-class outcome, not an error: the separability
certificate (witness battery + inner polytope) is sufficient but not
complete, so points that neither certificate reaches stay undetermined.
"""

from __future__ import annotations

from enum import Enum

__all__ = ["Verdict"]


class Verdict(str, Enum):
    """Outcome of classifying a point of the three-parameter family."""

    NOT_A_STATE = "NotAState"
    NPT_ENTANGLED = "NptEntangled"
    BOUND_ENTANGLED = "BoundEntangled"
    SEPARABLE = "Separable"
    UNDETERMINED = "Undetermined"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value
