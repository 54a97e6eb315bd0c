"""Problem and result containers shared by the 1D solvers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Sequence

from .errors import NonFiniteError

Derivative = Callable[[Any], Any]


class Method(str, enum.Enum):
    LOCAL = "local"
    LOCAL_QUADRATIC = "local-quadratic"
    NEWTON = "newton"
    HYBRID = "hybrid"
    ND_LOCAL = "nd-local"
    ND_HYBRID = "nd-hybrid"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class DifferentiableTarget:
    """A function known only through its derivatives and one anchor value.

    ``derivatives[j - 1]`` evaluates ``y^(j)``. The function value itself is
    never available to a solver; ``anchor_y`` is ``y(anchor_x)``.
    """

    derivatives: tuple[Derivative, ...]
    anchor_x: Any
    anchor_y: Any

    def __post_init__(self):
        object.__setattr__(self, "derivatives", tuple(self.derivatives))
        if not self.derivatives:
            raise ValueError("a target needs at least one derivative evaluator")
        if not (math.isfinite(self.anchor_x) and math.isfinite(self.anchor_y)):
            raise ValueError(
                f"anchor must be finite, got ({self.anchor_x!r}, {self.anchor_y!r})"
            )

    @property
    def order(self) -> int:
        return len(self.derivatives)

    def with_anchor(self, x, y) -> "DifferentiableTarget":
        return DifferentiableTarget(self.derivatives, x, y)


class TraceStep(NamedTuple):
    """One inching step: where it started, how far it moved, and what was sampled there."""

    x: Any
    dx: Any
    derivatives: tuple


@dataclass
class RootEstimate:
    root: Any
    steps: int
    derivative_evals: int
    method: Method
    iterations: int = 0
    trace: list[TraceStep] | None = None
    notes: dict = field(default_factory=dict)


class Probe:
    """Counts derivative evaluations and rejects non-finite samples."""

    def __init__(self, derivatives: Sequence[Derivative]):
        self._fns = tuple(derivatives)
        self.evals = 0

    def __len__(self):
        return len(self._fns)

    def eval(self, j: int, x):
        """``y^(j)(x)`` for 1-based ``j``."""
        self.evals += 1
        v = self._fns[j - 1](x)
        if not math.isfinite(v):
            raise NonFiniteError(f"y^({j}) is non-finite at x={x!r}: {v!r}")
        return v

    def upto(self, m: int, x) -> tuple:
        return tuple(self.eval(j, x) for j in range(1, m + 1))

    def fn(self, j: int) -> Derivative:
        return lambda x: self.eval(j, x)


def check_finite(x, what: str = "iterate"):
    if not math.isfinite(x):
        raise NonFiniteError(f"{what} left the finite range: {x!r}")
    return x
