"""Bundled scenarios and the scenario-file loader.

A scenario file is JSON with a ``preset`` name or an inline ``problem``
block, a theorem selector, and optional solver/tolerance/output settings.
Presets carry the full coefficient set of the worked examples; user fields
override preset fields shallowly (nested dicts merge one level deep).
"""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .expr import Expr
from .solver import DirichletBC, PdeProblem, RobinBC, SolverConfig
from .youngfn import YoungFunction

__all__ = [
    "PRESETS",
    "preset_names",
    "preset_dict",
    "Scenario",
    "scenario_from_dict",
    "scenario_from_file",
    "THEOREMS",
]

_PI = "3.141592653589793"

#: theorem selector -> (boundary family, needs Young fn, needs eps window)
THEOREMS = {
    "thm31i": ("robin", False, False),
    "thm31ii": ("robin", False, False),
    "thm32i": ("dirichlet", False, False),
    "thm32ii": ("dirichlet", False, False),
    "thm41": ("robin", True, False),
    "thm42": ("robin", True, False),
    "thm43": ("robin", True, True),
    "thm44": ("dirichlet", True, True),
    "prop51": ("robin", False, False),
    "robin52": ("robin", False, False),
}

PRESETS = {
    # pure diffusion with linear reaction and homogeneous Robin walls
    "heat_robin": {
        "problem": {
            "x_lo": 0.0, "x_hi": 1.0,
            "a": "1", "b": "0", "c": "1", "mu": "0",
            "boundary": {"type": "robin", "psi": "w"},
            "d_left": "0", "d_right": "0",
            "w0": f"sin({_PI}*x)",
            "cbar": 1.0, "psi0bar": 1.0, "s0": 1.0,
        },
        "theorem": "thm31i",
        "q": 1,
        "solver": {"n_x": 201, "T": 2.0, "cfl_safety": 0.9,
                   "checkpoint_dt": 0.1},
    },
    # 1-D viscous conservation law with cubic Robin feedback and
    # oscillatory boundary + in-domain forcing
    "burgers1d": {
        "problem": {
            "x_lo": -1.0, "x_hi": 1.0,
            "a": "1", "b": "0", "c": "1", "mu": "0",
            "m": "1", "g": "w^2/2", "g0": "1", "s0": 2.0,
            "f": "0.1*exp(-t)",
            "boundary": {"type": "robin", "psi": "w+w^3"},
            "d_left": "0.1*sin(t)", "d_right": "0.1*sin(t)",
            "w0": f"0.25*(1+cos({_PI}*x))",
            "cbar": 1.0, "psi0bar": 0.5,
        },
        "theorem": "thm31i",
        "q": 1,
        "solver": {"n_x": 201, "T": 3.0, "cfl_safety": 0.9,
                   "checkpoint_dt": 0.05},
    },
    # cubic-quintic reaction with nonlinear Dirichlet boundary data and a
    # vanishing parabolic weight
    "ginzburg_landau": {
        "problem": {
            "x_lo": 0.0, "x_hi": 1.0,
            "a": "1", "b": "0", "c": "1", "mu": "0",
            "h": "w^3+w^5",
            "f": "0.05*exp(-t)",
            "boundary": {"type": "dirichlet", "psi1": "1", "psi2": "s+s^3"},
            "d_left": "0.1*sin(t)", "d_right": "0.1*sin(t)",
            "w0": f"0.5*sin({_PI}*x)",
            "cbar": 1.0, "psi0bar": 1.0, "s0": 1.0,
        },
        "theorem": "thm32i",
        "q": 1,
        "weight_p0": 2.0,
        "solver": {"n_x": 201, "T": 2.0, "cfl_safety": 0.9,
                   "checkpoint_dt": 0.05},
    },
    # sign-changing net reaction: certified through the elliptic transform
    "special63": {
        "problem": {
            "x_lo": -1.0, "x_hi": 1.0,
            "a": "1", "b": "3*x", "c": "3*x^2+5/2",
            "mu": "3*abs(x)-x^2",
            "h": "(x^2-3/ln(2)*abs(x)*ln(1+abs(x)))*w/(1+w^2)",
            "boundary": {"type": "robin", "psi": "w"},
            "d_left": "0.05*sin(t)", "d_right": "0.05*sin(t)",
            "w0": f"0.25*(1+cos({_PI}*x))",
            "cbar": 0.0, "psi0bar": 1.0, "s0": 1.0,
        },
        "theorem": "prop51",
        "q": 1,
        "prop51": {"cbar": 1.5, "elliptic_q": "2-4*r^2", "elliptic_n": 401},
        "solver": {"n_x": 201, "T": 2.0, "cfl_safety": 0.9,
                   "checkpoint_dt": 0.05},
    },
    # constant-coefficient advection-diffusion with a slightly negative
    # reaction rate, certified in the cosine-exponential weight
    "linear52": {
        "problem": {
            "x_lo": 0.0, "x_hi": 1.0,
            "a": "1", "b": "1", "c": "-0.2", "mu": "0",
            "boundary": {"type": "robin", "psi": "w"},
            "d_left": "-0.05*sin(t)", "d_right": "0.05*sin(t)",
            "w0": "0.25*x^2*(1-x)^2",
            "cbar": 0.0, "psi0bar": 0.0, "s0": 1.0,
        },
        "theorem": "robin52",
        "q": 1,
        "robin52": {"theta": 0.5, "K": 1.0},
        "solver": {"n_x": 201, "T": 2.0, "cfl_safety": 0.9,
                   "checkpoint_dt": 0.05},
    },
}

_PRESET_NOTES = {
    "heat_robin": "heat + linear reaction, homogeneous Robin, decaying initial bump",
    "burgers1d": "viscous Burgers with cubic Robin feedback and sinusoidal boundary input",
    "ginzburg_landau": "cubic-quintic reaction, nonlinear Dirichlet data, weighted norm",
    "special63": "sign-changing reaction certified via the elliptic transform",
    "linear52": "advection-diffusion with c < 0 in the cosine-exponential weight",
}


def preset_names():
    return list(PRESETS)


def preset_dict(name):
    try:
        base = PRESETS[name]
    except KeyError:
        raise KeyError(
            f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
    return copy.deepcopy(base)


def preset_note(name):
    return _PRESET_NOTES.get(name, "")


# --------------------------------------------------------------------------
# scenario assembly
# --------------------------------------------------------------------------

@dataclass
class Scenario:
    problem: PdeProblem
    theorem: str
    q: float
    solver: SolverConfig
    young: YoungFunction = None
    tau: object = "auto"
    eps: object = "auto"
    rel_margin_slack: float = 0.02
    dissipation_slack_scale: float = 10.0
    waive_structural: bool = False
    weight_p0: float = 2.0
    gains: object = "auto"
    prop51_cbar: float = None
    elliptic_q: Expr = None
    elliptic_n: int = 401
    robin52_theta: float = None
    robin52_K: float = None
    outputs: dict = field(default_factory=dict)
    preset: str = None
    raw: dict = field(default_factory=dict)

    def canonical_json(self):
        return json.dumps(self.raw, sort_keys=True, separators=(",", ":"))


def _parse_q(q):
    if isinstance(q, str):
        if q.lower() in ("inf", "infinity"):
            return np.inf
        return float(q)
    q = float(q)
    if q < 1:
        raise ValueError("q must lie in [1, inf]")
    return q


def _build_problem(spec):
    spec = dict(spec)
    bspec = spec.pop("boundary")
    btype = bspec.get("type")
    if btype == "robin":
        boundary = RobinBC(psi=bspec["psi"])
    elif btype == "dirichlet":
        boundary = DirichletBC(psi1=bspec["psi1"], psi2=bspec["psi2"])
    else:
        raise ValueError("boundary type must be 'robin' or 'dirichlet'")
    return PdeProblem(boundary=boundary, **spec)


def _merge(base, override):
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key].update(copy.deepcopy(val))
        else:
            out[key] = copy.deepcopy(val)
    return out


def scenario_from_dict(data):
    """Build a runnable Scenario from a scenario-file dict."""
    data = copy.deepcopy(data)
    preset = data.get("preset")
    if preset is not None:
        merged = _merge(preset_dict(preset), {k: v for k, v in data.items()
                                              if k != "preset"})
    else:
        merged = data
    if "problem" not in merged:
        raise ValueError("scenario needs a 'preset' or a 'problem' block")
    theorem = merged.get("theorem")
    if theorem not in THEOREMS:
        raise ValueError(
            f"unknown theorem selector {theorem!r}; one of {', '.join(THEOREMS)}")

    problem = _build_problem(merged["problem"])
    family = THEOREMS[theorem][0]
    if (family == "dirichlet") != problem.is_dirichlet:
        raise ValueError(
            f"theorem {theorem} requires a {family} boundary condition")

    solver_spec = dict(merged.get("solver", {}))
    if "advection" in solver_spec:
        solver_spec["advection_scheme"] = solver_spec.pop("advection")
    cfg = SolverConfig(**solver_spec)

    young = None
    if merged.get("young") is not None:
        young = YoungFunction.from_dict(merged["young"])
    if THEOREMS[theorem][1] and young is None:
        raise ValueError(f"theorem {theorem} requires a 'young' block")

    tol = merged.get("tolerances", {})
    p51 = merged.get("prop51", {})
    r52 = merged.get("robin52", {})
    elliptic_q = None
    if p51.get("elliptic_q"):
        elliptic_q = Expr(p51["elliptic_q"], ("r",))
    if theorem == "prop51" and (p51.get("cbar") is None or elliptic_q is None):
        raise ValueError("prop51 scenarios need prop51.cbar and prop51.elliptic_q")
    if theorem == "robin52":
        if r52.get("theta") is None or r52.get("K") is None:
            raise ValueError("robin52 scenarios need robin52.theta and robin52.K")
        if not (math.isclose(problem.x_lo, 0.0) and math.isclose(problem.x_hi, 1.0)):
            raise ValueError("the cosine-weighted estimate is built on (0, 1)")

    return Scenario(
        problem=problem,
        theorem=theorem,
        q=_parse_q(merged.get("q", 1)),
        solver=cfg,
        young=young,
        tau=merged.get("tau", "auto"),
        eps=merged.get("eps", "auto"),
        rel_margin_slack=float(tol.get("rel_margin_slack", 0.02)),
        dissipation_slack_scale=float(tol.get("dissipation_slack_scale", 10.0)),
        waive_structural=bool(merged.get("waive_structural", False)),
        weight_p0=float(merged.get("weight_p0", 2.0)),
        gains=merged.get("gains", "auto"),
        prop51_cbar=p51.get("cbar"),
        elliptic_q=elliptic_q,
        elliptic_n=int(p51.get("elliptic_n", 401)),
        robin52_theta=r52.get("theta"),
        robin52_K=r52.get("K"),
        outputs=dict(merged.get("outputs", {})),
        preset=preset,
        raw=merged,
    )


def scenario_from_file(path):
    with open(path) as fh:
        data = json.load(fh)
    return scenario_from_dict(data)
