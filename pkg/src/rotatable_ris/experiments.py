"""
Orchestration behind the management commands: running a resolved
experiment, rendering CSV tables and packaging run archives.
"""
from dataclasses import replace
from importlib import metadata
import json
import logging
from typing import Optional

import pandas as pd

from .channel import realize, trial_stream
from .design import p2_feasibility
from .models import ExperimentConfig, FeasibilityMapConfig, SweepResult
from .parsers import serialize_config
from .simkit import point_design, run_sweep
from .utils import RisError, get_setting

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.12g"

FEASIBILITY_CSV_COLUMNS = ["p2", "p_unit", "regime", "feasible",
                           "margin_watts", "inequality_holds",
                           "near_boundary", "discrepancy"]


def _software_version() -> str:
    try:
        return metadata.version("django-rotatable-ris")
    except metadata.PackageNotFoundError:  # pragma: no cover
        return "unknown"


def run_experiment(config: ExperimentConfig,
                   n_jobs: Optional[int] = None) -> SweepResult:
    """
    Run the sweep of a resolved config.

    :raises rotatable_ris.utils.RisError: ``validation-error`` if the
        geometry cannot be evaluated, e.g. a rotation outside the sector or
        a block count not dividing a swept N_s.
    """
    try:
        return run_sweep(config.geometry, config.power, config.sweep, n_jobs)
    except RisError as e:
        if e.error_code in ("invalid-argument", "out-of-sector"):
            raise RisError({"error_code": "validation-error",
                            "msg": e.msg})
        raise


def dump_channels(config: ExperimentConfig, n_draws: int = 1) -> str:
    """
    Channel draws of the BC-RIS at the first sweep point as canonical JSON,
    for debugging. Draw ``i`` is the one trial ``i`` of the simulation sees.

    :raises rotatable_ris.utils.RisError: ``validation-error`` if the
        geometry cannot be evaluated, ``invalid-argument`` if ``n_draws``
        is below one.
    """
    if n_draws < 1:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_draws must be >= 1, got " + str(n_draws) +
                               "."})
    sweep = config.sweep
    try:
        geometry, ris_config, _ = point_design(config.geometry, config.power,
                                               sweep, sweep.grid[0])
    except RisError as e:
        if e.error_code in ("invalid-argument", "out-of-sector"):
            raise RisError({"error_code": "validation-error",
                            "msg": e.msg})
        raise
    draws = []
    for trial in range(n_draws):
        draw = realize(geometry, ris_config,
                       trial_stream(sweep.seed, trial)).to_dict()
        draw["trial"] = trial
        draws.append(draw)
    document = {"axis": sweep.axis, "axis_value": sweep.grid[0],
                "seed": sweep.seed, "n_blocks": geometry.n_blocks,
                "rotation_angles": list(ris_config.rotation_angles),
                "reflection_phases": list(ris_config.reflection_phases),
                "draws": draws}
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def to_csv(frame: pd.DataFrame) -> str:
    """
    Locale independent CSV text: 12 significant digits, fixed column order,
    LF line endings.
    """
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT,
                        lineterminator="\n")


def write_text(text: str, path: str):
    """
    :raises rotatable_ris.utils.RisError: ``io-error`` if ``path`` cannot
        be written.
    """
    try:
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    except OSError as e:
        raise RisError({"error_code": "io-error",
                        "msg": "Cannot write " + str(path) + ": " + str(e)})


def sweep_csv(result: SweepResult) -> str:
    return to_csv(result.to_frame())


def write_archive(config: ExperimentConfig, result: SweepResult, path: str):
    """
    Store the resolved config and the full result as a SciDataContainer
    (``data/config.json`` and ``data/result.json``).

    :raises rotatable_ris.utils.RisError: ``io-error`` if the archive cannot
        be written.
    """
    from scidatacontainer import Container

    items = {
        "content.json": {
            "containerType": {"name": "RotatableRisSweep",
                              "version": config.config_version},
            "usedSoftware": [{"name": "django-rotatable-ris",
                              "version": _software_version()}],
        },
        "meta.json": {
            "title": "Rotatable BC-RIS sweep over " + result.axis_name,
            "author": get_setting("RIS_ARCHIVE_AUTHOR"),
            "email": get_setting("RIS_ARCHIVE_EMAIL"),
            "description": "Monte Carlo SE, SE bounds, power and EE of a "
                           "rotatable BC-RIS and its EC-RIS counterpart.",
        },
        "data/config.json": json.loads(serialize_config(config)),
        "data/result.json": result.to_dict(),
    }
    try:
        Container(items=items).write(path)
    except OSError as e:
        raise RisError({"error_code": "io-error",
                        "msg": "Cannot write " + str(path) + ": " + str(e)})
    logger.info("Wrote archive %s", path)


def feasibility_map(config: FeasibilityMapConfig,
                    grid_points: Optional[int] = None) -> pd.DataFrame:
    """
    Feasibility verdict for every ``(P2, P_unit)`` of the grid, P2 varying
    fastest within each P_unit.
    """
    rows = []
    for p_unit in config.p_unit_grid:
        for p2 in config.p2_grid:
            params = replace(config.power, rotate_circuit_power=p2,
                             unit_rotation_power=p_unit)
            verdict = p2_feasibility(params, config.n_elements, grid_points)
            rows.append({"p2": p2, "p_unit": p_unit,
                         "regime": verdict.regime.value,
                         "feasible": verdict.feasible,
                         "margin_watts": verdict.margin,
                         "inequality_holds": verdict.inequality_holds,
                         "near_boundary": verdict.near_boundary,
                         "discrepancy": verdict.discrepancy})
    frame = pd.DataFrame(rows, columns=FEASIBILITY_CSV_COLUMNS)
    logger.info("Feasibility map: %d of %d points feasible, %d "
                "discrepancies", int(frame["feasible"].sum()), len(frame),
                int(frame["discrepancy"].sum()))
    return frame


def emit_feasibility_map(config: FeasibilityMapConfig,
                         grid_points: Optional[int] = None) -> str:
    """
    CSV text of :func:`feasibility_map`.
    """
    return to_csv(feasibility_map(config, grid_points))
