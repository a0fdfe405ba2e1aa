"""Command-line front end.

Subcommands::

    simulate <scenario.json>     integrate and export the trajectory CSV
    verify <scenario.json> ...   simulate + bound check; writes CSV/JSON
                                 reports and a PNG figure per scenario
    props [--seed N]             run the inequality property suites
    orlicz-norm <Y-spec> <csv>   Luxemburg norm of a sampled signal
    presets                      list bundled scenarios

Exit status: 0 when everything passes, 2 on a verification failure, 1 on
errors.  ISS_VERIFY_THREADS caps the workers used for multi-file verify.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import harness, norms, presets, report
from .presets import preset_names, preset_note, scenario_from_file
from .youngfn import YoungFunction

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED = 2


def _default_outputs(scenario, path, kind, flags):
    out = dict(scenario.outputs)
    stem = Path(path).with_suffix("")
    out.setdefault("csv", f"{stem}.{kind}.csv")
    out.setdefault("json", f"{stem}.{kind}.json")
    if not flags.get("no_figure"):
        out.setdefault("png", f"{stem}.{kind}.png")
    elif "png" in out:
        del out["png"]
    return out


def _cmd_simulate(args):
    scenario = scenario_from_file(args.scenario)
    from .solver import integrate

    traj = integrate(scenario.problem, scenario.solver)
    out = args.out or _default_outputs(scenario, args.scenario, "trajectory",
                                       {"no_figure": True})["csv"]
    traj.to_csv(out)
    print(f"wrote {len(traj.times)} checkpoints to {out} "
          f"(dt = {traj.dt_used:.3e})")
    return EXIT_OK


def _verify_one(path, no_figure):
    scenario = scenario_from_file(path)
    traj, rep = harness.run_scenario(scenario)
    outputs = _default_outputs(scenario, path, "report",
                               {"no_figure": no_figure})
    report.emit_report(rep, csv_path=outputs.get("csv"),
                       json_path=outputs.get("json"),
                       png_path=outputs.get("png"))
    return rep


def _cmd_verify(args):
    n_workers = int(os.environ.get("ISS_VERIFY_THREADS", "0")) or min(
        len(args.scenarios), os.cpu_count() or 1)
    results = {}
    errors = {}
    if len(args.scenarios) == 1 or n_workers <= 1:
        for path in args.scenarios:
            try:
                results[path] = _verify_one(path, args.no_figure)
            except Exception as exc:  # noqa: BLE001 - report and keep going
                errors[path] = exc
    else:
        import concurrent.futures as cf

        with cf.ProcessPoolExecutor(max_workers=n_workers) as pool:
            futures = {pool.submit(_verify_one, path, args.no_figure): path
                       for path in args.scenarios}
            for fut in cf.as_completed(futures):
                path = futures[fut]
                try:
                    results[path] = fut.result()
                except Exception as exc:  # noqa: BLE001
                    errors[path] = exc

    status = EXIT_OK
    for path in args.scenarios:
        if path in errors:
            print(f"{path}: ERROR: {errors[path]}")
            status = EXIT_ERROR
        else:
            rep = results[path]
            print(f"{path}:")
            print(rep.summary())
            if not rep.passed and status != EXIT_ERROR:
                status = EXIT_FAILED
    return status


def _cmd_props(args):
    result = harness.run_property_suites(seed=args.seed)
    print(result.summary())
    return EXIT_OK if result.passed else EXIT_FAILED


def _cmd_orlicz_norm(args):
    Y = YoungFunction.from_dict(json.loads(args.young))
    with open(args.csv) as fh:
        header = fh.readline().strip().lower()
    data = np.loadtxt(args.csv, delimiter=",", skiprows=1, ndmin=2)
    if header.startswith("t,"):
        series = norms.TimeSeries(data[:, 0], data[:, 1])
        value = norms.time_luxemburg_norm(Y, series)
        kind = "time"
    elif header.startswith("x,"):
        xs = data[:, 0]
        grid = norms.GridFunction1D(xs[0], xs[-1], data[:, 1])
        value = norms.luxemburg_norm(Y, grid)
        kind = "space"
    else:
        print("CSV must start with a 't,value' or 'x,value' header")
        return EXIT_ERROR
    print(f"{kind} Luxemburg norm: {value:.12g}")
    return EXIT_OK


def _cmd_presets(args):
    for name in preset_names():
        spec = presets.preset_dict(name)
        print(f"{name:<16s} theorem={spec['theorem']:<8s} {preset_note(name)}")
    return EXIT_OK


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="issverify",
        description="Simulate 1-D parabolic PDEs with boundary disturbances "
                    "and certify stability bounds on the trajectories.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="integrate and export a trajectory")
    p_sim.add_argument("scenario")
    p_sim.add_argument("--out", help="trajectory CSV path")
    p_sim.set_defaults(fn=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="simulate and check the bound")
    p_ver.add_argument("scenarios", nargs="+")
    p_ver.add_argument("--no-figure", action="store_true",
                       help="skip the PNG figure")
    p_ver.set_defaults(fn=_cmd_verify)

    p_props = sub.add_parser("props", help="run the property suites")
    p_props.add_argument("--seed", type=int, default=0)
    p_props.set_defaults(fn=_cmd_props)

    p_norm = sub.add_parser("orlicz-norm",
                            help="Luxemburg norm of a sampled CSV signal")
    p_norm.add_argument("young", help='e.g. \'{"variant":"power","params":{"q":2}}\'')
    p_norm.add_argument("csv")
    p_norm.set_defaults(fn=_cmd_orlicz_norm)

    p_list = sub.add_parser("presets", help="list bundled scenarios")
    p_list.set_defaults(fn=_cmd_presets)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (harness.ScenarioError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
