"""Lightweight operation counters for preprocessing-cost and delay checks."""


class OpCounter:
    __slots__ = ("n",)

    def __init__(self) -> None:
        self.n = 0

    def tick(self, k: int = 1) -> None:
        self.n += k

    def __repr__(self) -> str:
        return f"OpCounter(n={self.n})"
