from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class RunStats:
    """Error, expected cost and per-coordinate query probabilities of a strategy.

    Exact statistics hold :class:`~fractions.Fraction` values and leave the
    ``*_se`` fields as ``None``. Monte Carlo statistics hold floats together
    with their standard errors and the sample count.
    """

    error: object
    expected_cost: object
    query_prob: tuple
    avg_influence: object = None
    worst_cost: object = None
    misclassified: int | None = None
    samples: int | None = None
    error_se: float | None = None
    cost_se: float | None = None
    query_prob_se: tuple | None = field(default=None)

    @property
    def exact(self):
        return self.samples is None
