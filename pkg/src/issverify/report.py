"""Verification reports and their CSV / JSON / figure outputs."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "StructuralCheck",
    "VerificationReport",
    "emit_report",
    "load_report_json",
]


@dataclass
class StructuralCheck:
    """One sampled structural-assumption check, named by its tag."""

    tag: str
    description: str
    value: float
    ok: bool
    warn_only: bool = False

    def to_dict(self):
        return {
            "tag": self.tag,
            "description": self.description,
            "value": None if self.value is None else float(self.value),
            "ok": bool(self.ok),
            "warn_only": self.warn_only,
        }


@dataclass
class VerificationReport:
    """Per-checkpoint comparison of the measured norm against its bound.

    ``pass`` is purely margin-based: the smallest relative margin must not
    fall below ``-rel_margin_slack`` (the budget for discretization noise
    and the smoothing offset, which is reported separately as
    ``tau_slack``).
    """

    times: np.ndarray
    lhs: np.ndarray
    rhs: np.ndarray
    theorem: str
    rel_margin_slack: float
    tau: float
    tau_slack: float
    preset: str = None
    q: float = None
    gains: dict = None
    structural: list = field(default_factory=list)
    scenario_hash: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def margins(self):
        return self.rhs - self.lhs

    @property
    def rel_margins(self):
        scale = np.maximum(np.maximum(np.abs(self.rhs), np.abs(self.lhs)), 1e-30)
        return self.margins / scale

    @property
    def min_rel_margin(self):
        return float(np.min(self.rel_margins))

    @property
    def passed(self):
        return self.min_rel_margin >= -self.rel_margin_slack

    def structural_ok(self):
        return all(c.ok for c in self.structural if not c.warn_only)

    def summary_dict(self):
        import numpy
        import scipy

        from . import __version__

        return {
            "scenario_hash": self.scenario_hash,
            "theorem": self.theorem,
            "preset": self.preset,
            "q": None if self.q is None else ("inf" if np.isinf(self.q) else float(self.q)),
            "pass": bool(self.passed),
            "min_rel_margin": self.min_rel_margin,
            "rel_margin_slack": self.rel_margin_slack,
            "checkpoints": int(len(self.times)),
            "tau": float(self.tau),
            "tau_slack": float(self.tau_slack),
            "gains": self.gains,
            "structural": [c.to_dict() for c in self.structural],
            "structural_ok": self.structural_ok(),
            "extra": self.extra,
            "versions": {
                "issverify": __version__,
                "numpy": numpy.__version__,
                "scipy": scipy.__version__,
            },
        }

    def summary(self):
        state = "PASS" if self.passed else "FAIL"
        lines = [
            f"{self.theorem}"
            + (f" [{self.preset}]" if self.preset else "")
            + f": {state}  min_rel_margin={self.min_rel_margin:+.4e}"
            f" (slack {self.rel_margin_slack:g})",
            f"  tau={self.tau:g} (offset budget {self.tau_slack:.3e}),"
            f" checkpoints={len(self.times)}",
        ]
        for c in self.structural:
            mark = "ok" if c.ok else ("warn" if c.warn_only else "FAIL")
            val = "" if c.value is None else f" = {c.value:.6g}"
            lines.append(f"  [{c.tag}] {c.description}{val} ... {mark}")
        return "\n".join(lines)


def scenario_hash(canonical_json):
    return hashlib.sha256(canonical_json.encode()).hexdigest()[:16]


def write_report_csv(report, path):
    rel = report.rel_margins
    margins = report.margins
    with open(path, "w") as fh:
        fh.write("t,lhs,rhs,margin,rel_margin\n")
        for i, t in enumerate(report.times):
            fh.write(f"{t:.17g},{report.lhs[i]:.17g},{report.rhs[i]:.17g},"
                     f"{margins[i]:.17g},{rel[i]:.17g}\n")


def write_report_json(report, path):
    with open(path, "w") as fh:
        json.dump(report.summary_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_report_json(path):
    with open(path) as fh:
        return json.load(fh)


def render_report_figure(report, path):
    """Two-panel figure: measured norm vs. bound, and the relative margin."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(7.0, 5.4), sharex=True,
        gridspec_kw={"height_ratios": [2.2, 1.0]})
    t = report.times
    ax0.plot(t, report.lhs, label="measured norm", color="tab:blue")
    ax0.plot(t, report.rhs, label="certified bound", color="tab:red", ls="--")
    if np.all(report.lhs > 0) and np.all(report.rhs > 0):
        ax0.set_yscale("log")
    ax0.set_ylabel("norm")
    ax0.legend(loc="best", fontsize=9)
    title = report.theorem + (f" [{report.preset}]" if report.preset else "")
    ax0.set_title(f"{title}: {'PASS' if report.passed else 'FAIL'}", fontsize=11)

    ax1.plot(t, report.rel_margins, color="tab:green")
    ax1.axhline(-report.rel_margin_slack, color="tab:red", lw=0.8, ls=":")
    ax1.axhline(0.0, color="k", lw=0.6)
    ax1.set_xlabel("t")
    ax1.set_ylabel("rel. margin")
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)


def emit_report(report, csv_path=None, json_path=None, png_path=None):
    """Write the delimited rows, the JSON summary, and the figure."""
    if csv_path:
        write_report_csv(report, csv_path)
    if json_path:
        write_report_json(report, json_path)
    if png_path:
        render_report_figure(report, png_path)
