"""Communication scenarios: network type, feedback protocol and budgets."""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .fading import FadingModel

NETWORKS = ("TPIL", "IL", "IPIL")
FEEDBACKS = ("full", "kscg")


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


@dataclass(frozen=True)
class ScenarioConfig:
    """One point of the scenario table.

    ``q_ave = math.inf`` drops the interference constraint, which turns IPIL
    into a primary MAC with individual power constraints and TPIL into a
    primary MAC with a total power constraint.  IL ignores ``p_ave``.
    """

    network: str
    stsb: FadingModel
    stpb: FadingModel
    n: int
    p_ave: float = db_to_linear(15.0)
    q_ave: float = 1.0
    feedback: str = "full"
    k_exponent: float | None = None
    k_const: int | None = None

    def __post_init__(self):
        net = self.network.upper()
        object.__setattr__(self, "network", net)
        fb = self.feedback.lower()
        object.__setattr__(self, "feedback", fb)
        if net not in NETWORKS:
            raise ValueError(f"network must be one of {NETWORKS}, got {self.network!r}")
        if fb not in FEEDBACKS:
            raise ValueError(f"feedback must be one of {FEEDBACKS}, got {self.feedback!r}")
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError(f"N must be a positive integer, got {self.n!r}")
        if not self.p_ave > 0 or not self.q_ave > 0:
            raise ValueError("P_ave and Q_ave must be positive")
        if net == "IL" and math.isinf(self.q_ave):
            raise ValueError("an IL network needs a finite interference budget")
        if fb == "kscg":
            if (self.k_exponent is None) == (self.k_const is None):
                raise ValueError("K-SCG feedback needs exactly one of k_exponent, k_const")
            if self.k_exponent is not None and not 0.0 < self.k_exponent < 1.0:
                raise ValueError(f"k_exponent must lie in (0, 1), got {self.k_exponent}")
            if self.k_const is not None and self.k_const < 1:
                raise ValueError(f"k_const must be >= 1, got {self.k_const}")

    @classmethod
    def from_db(cls, network, stsb, stpb, n, p_ave_db=15.0, q_ave_db=0.0, **kw):
        return cls(network, stsb, stpb, n, db_to_linear(p_ave_db), db_to_linear(q_ave_db), **kw)

    @property
    def k(self) -> int:
        """Number of STPB gains fed back, K(N)."""
        if self.feedback == "full":
            return self.n
        if self.k_const is not None:
            return min(self.n, self.k_const)
        # guard against pow() landing a hair above an exact integer
        kk = math.ceil(self.n ** self.k_exponent - 1e-9)
        return max(1, min(self.n, kk))

    @property
    def has_interference_limit(self) -> bool:
        return not math.isinf(self.q_ave)

    @property
    def power_target(self) -> float | None:
        """Budget on the average *total* power, or None when power is free."""
        if self.network == "TPIL":
            return self.p_ave
        if self.network == "IPIL":
            # symmetric users: E[P_i] = E[total] / N
            return self.n * self.p_ave
        return None

    @property
    def label(self) -> str:
        fb = "F" if self.feedback == "full" else f"K(K={self.k})"
        return f"CoS^{fb}_{self.network} {self.stsb}/{self.stpb}"

    def with_n(self, n: int) -> "ScenarioConfig":
        return dataclasses.replace(self, n=n)

    def replace(self, **changes) -> "ScenarioConfig":
        return dataclasses.replace(self, **changes)
