"""Score-profile curves: descending sort followed by a moving average."""

from __future__ import annotations

import math
from typing import Sequence

from ..errors import WindowTooLarge


def moving_average_curve(scores: Sequence[float], window: int = 2) -> list[float]:
    """Sort scores descending, then average each consecutive window.

    A window of w over n scores yields n - w + 1 values; window 1 returns the
    sorted scores unchanged and window n collapses to the grand mean.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    if window > len(scores):
        raise WindowTooLarge(f"window {window} exceeds series length {len(scores)}")
    ordered = sorted(scores, reverse=True)
    return [
        math.fsum(ordered[i : i + window]) / window
        for i in range(len(ordered) - window + 1)
    ]
