"""Shared result types for the numerical property-check suites."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class ItemResult:
    """Outcome of one checked inequality family.

    ``worst_slack`` is the most negative relative slack seen across all
    samples; a slack of ``r - l`` (suitably normalized) means the inequality
    ``l <= r`` held with that much room.  Failures count samples whose slack
    fell below ``-tol``.
    """

    name: str
    n_checked: int
    n_failed: int
    worst_slack: float

    @property
    def passed(self):
        return self.n_failed == 0


@dataclass
class CheckReport:
    name: str
    seed: int
    tol: float
    items: list = field(default_factory=list)

    @property
    def passed(self):
        return all(item.passed for item in self.items)

    @property
    def worst_slack(self):
        return min((item.worst_slack for item in self.items), default=0.0)

    def item(self, name):
        for it in self.items:
            if it.name == name:
                return it
        raise KeyError(name)

    def summary(self):
        lines = [f"{self.name}: {'PASS' if self.passed else 'FAIL'}"]
        for it in self.items:
            lines.append(
                f"  {it.name:<28s} n={it.n_checked:<6d} failed={it.n_failed:<4d} "
                f"worst_slack={it.worst_slack:+.3e}"
            )
        return "\n".join(lines)
