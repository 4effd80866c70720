"""
Seeded Monte Carlo estimation of the averaged SE and EE.

Trial ``i`` draws its NLoS components from ``trial_stream(seed, i)``
whatever the chunking or the number of workers, and the per-trial values
are concatenated in trial order before any reduction. Results are
therefore identical for every ``n_jobs``. The EC-RIS and the BC-RIS of the
same sweep point use the same per-trial streams.
"""
import logging
import math
import numbers
from typing import Dict, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed
import numpy as np
import pandas as pd

from .channel import build_reflection_vector, los_components,\
                     sample_channels, trial_stream
from .design import conventional_configuration,\
                    element_controlled_configuration, optimal_block_count,\
                    optimal_configuration, optimal_rotation
from .metrics import channel_gain, energy_efficiency, se_upper_bound_bc,\
                     se_upper_bound_ec
from .models import AXES, SEGMENTATIONS, LinkBudget, PowerParams,\
                    RisConfiguration, SweepResult, SweepSpec, SystemGeometry
from .power import power_bc_uniform, power_ec
from .utils import RisError, get_setting

logger = logging.getLogger(__name__)

Design = Tuple[SystemGeometry, RisConfiguration]


def _check_trials(n_trials: int) -> int:
    if isinstance(n_trials, bool) or\
            not isinstance(n_trials, numbers.Integral):
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_trials must be an integer, got " +
                               repr(n_trials) + "."})
    if n_trials < 2:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_trials must be >= 2, got " +
                               str(int(n_trials)) + "."})
    return int(n_trials)


def _gain_chunk(designs, seed: int, start: int, stop: int) -> np.ndarray:
    gains = np.empty((len(designs), stop - start))
    for j, trial in enumerate(range(start, stop)):
        for i, (geometry, rotations, los, reflection) in enumerate(designs):
            bs_ris, ris_ue = sample_channels(geometry, rotations,
                                             trial_stream(seed, trial), los)
            gains[i, j] = channel_gain(bs_ris, ris_ue, reflection)
    return gains


def channel_gains(designs: Sequence[Design], n_trials: int, seed: int,
                  n_jobs: Optional[int] = None) -> np.ndarray:
    """
    Per-trial cascaded gains ``||g^T diag(v) G||^2`` of every design. The
    gains do not depend on the transmit power, so one call serves a whole
    SNR sweep.

    :param designs: ``(geometry, configuration)`` pairs sharing N_s and N_b.
    :param n_trials: Number of channel draws.
    :param seed: 64-bit seed.
    :param n_jobs: joblib workers; defaults to ``RIS_N_JOBS``.

    :return: Array of shape ``(len(designs), n_trials)``.
    """
    if n_jobs is None:
        n_jobs = get_setting("RIS_N_JOBS")
    chunk_size = int(get_setting("RIS_CHUNK_SIZE"))
    prepared = []
    for geometry, config in designs:
        prepared.append((geometry, config.rotation_angles,
                         los_components(geometry, config.rotation_angles),
                         build_reflection_vector(config, geometry)))
    bounds = [(start, min(start + chunk_size, n_trials))
              for start in range(0, n_trials, chunk_size)]
    chunks = Parallel(n_jobs=n_jobs)(
        delayed(_gain_chunk)(prepared, seed, start, stop)
        for start, stop in bounds)
    return np.concatenate(chunks, axis=1)


def _summarize(se: np.ndarray) -> Tuple[float, float]:
    return float(np.mean(se)), float(np.std(se, ddof=1) / math.sqrt(se.size))


def _se_from_gains(gains: np.ndarray, budget: LinkBudget) -> np.ndarray:
    return np.log2(1 + budget.snr * gains)


def estimate_average_se(geometry: SystemGeometry, config: RisConfiguration,
                        budget: LinkBudget, n_trials: int, seed: int,
                        n_jobs: Optional[int] = None) -> Tuple[float, float]:
    """
    Monte Carlo mean of the instantaneous SE under MRT and its standard
    error ``std(ddof=1) / sqrt(n_trials)``. In LoS-only mode every draw is
    the same, so the deterministic SE is returned with zero error.

    :raises rotatable_ris.utils.RisError: If ``n_trials < 2``.

    :return: ``(mean, std_error)`` in bits/s/Hz.
    """
    n_trials = _check_trials(n_trials)
    if geometry.los_only:
        gains = channel_gains([(geometry, config)], 1, seed, n_jobs=1)
        return float(_se_from_gains(gains[0], budget)[0]), 0.0
    gains = channel_gains([(geometry, config)], n_trials, seed, n_jobs)
    return _summarize(_se_from_gains(gains[0], budget))


def _monte_carlo(designs: List[Design], budget: LinkBudget, n_trials: int,
                 seed: int, n_jobs: Optional[int],
                 cache: Dict) -> List[Tuple[float, float]]:
    key = tuple(designs)
    if key not in cache:
        if all(geometry.los_only for geometry, _ in designs):
            cache[key] = channel_gains(designs, 1, seed, n_jobs=1)
        else:
            cache[key] = channel_gains(designs, n_trials, seed, n_jobs)
    gains = cache[key]
    if gains.shape[1] == 1:
        return [(float(_se_from_gains(row, budget)[0]), 0.0)
                for row in gains]
    return [_summarize(_se_from_gains(row, budget)) for row in gains]


def _point(geometry: SystemGeometry, spec: SweepSpec,
           value: float) -> Tuple[SystemGeometry, LinkBudget]:
    if spec.axis == "snr":
        return geometry, LinkBudget.from_snr_db(value, spec.noise_power)
    budget = LinkBudget.from_snr_db(spec.snr_db, spec.noise_power)
    if spec.axis == "kappa":
        return geometry.with_kappa(value, value), budget
    if value != int(value):
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_elements grid values must be integers, " +
                               "got " + str(value) + "."})
    return geometry.with_elements(int(value), 1), budget


def point_design(geometry: SystemGeometry, power_params: PowerParams,
                 spec: SweepSpec, value: float
                 ) -> Tuple[SystemGeometry, RisConfiguration, LinkBudget]:
    """
    BC-RIS of one sweep point: the segmented geometry, its specular
    rotation with optimal phases, and the point's link budget.

    :raises rotatable_ris.utils.RisError: ``out-of-sector`` under optimal
        segmentation, ``invalid-argument`` if a fixed block count does not
        divide the point's N_s.
    """
    point, budget = _point(geometry, spec, value)
    if spec.segmentation == "optimal":
        theta = optimal_rotation(geometry.aoa_ris, geometry.aod_ris)
        k = optimal_block_count(power_params, point.n_ris_elements,
                                theta).chosen_k
    elif spec.axis == "n_elements":
        k = geometry.n_blocks
    else:
        k = point.n_blocks
    bc_geometry = point.with_blocks(k)
    return bc_geometry, optimal_configuration(bc_geometry), budget


def run_sweep(geometry: SystemGeometry, power_params: PowerParams,
              spec: SweepSpec, n_jobs: Optional[int] = None) -> SweepResult:
    """
    Evaluate the BC-RIS, its EC-RIS counterpart and a non-rotatable BC-RIS
    along one axis.

    At every point the BC-RIS gets the specular rotation and optimal
    phases. With ``segmentation="optimal"`` its block count minimizes the
    power for that rotation; with ``"fixed"`` the block count of
    ``geometry`` is kept. The EC-RIS uses the optimal per-element phases
    without rotation. SE is averaged over ``spec.n_trials`` draws; EE is the
    averaged SE over the total power at the point's transmit power.

    :param geometry: Base geometry; the swept quantity overrides it.
    :param power_params: Power coefficients.
    :param spec: Axis, grid, trials, seed, segmentation mode and, for the
        non-SNR axes, the fixed SNR.
    :param n_jobs: joblib workers; defaults to ``RIS_N_JOBS``.

    :raises rotatable_ris.utils.RisError: On an unknown axis or
        segmentation mode, an empty grid, fewer than two trials, a rotation
        outside the sector under optimal segmentation or a fixed block count
        that does not divide a swept N_s.
    """
    if spec.axis not in AXES:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "Unknown sweep axis '" + str(spec.axis) +
                               "'."})
    if spec.segmentation not in SEGMENTATIONS:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "Unknown segmentation '" +
                               str(spec.segmentation) + "'."})
    if not spec.grid:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "The sweep grid is empty."})
    n_trials = _check_trials(spec.n_trials)

    theta = optimal_rotation(geometry.aoa_ris, geometry.aod_ris)
    cache = {}
    rows = []
    for value in spec.grid:
        bc_geometry, bc_config, budget = point_design(geometry, power_params,
                                                      spec, value)
        n_s = bc_geometry.n_ris_elements
        k = bc_geometry.n_blocks
        ec_geometry = bc_geometry.element_controlled()
        ec_config = element_controlled_configuration(bc_geometry)

        (se_bc, err_bc), (se_ec, err_ec) = _monte_carlo(
            [(bc_geometry, bc_config), (ec_geometry, ec_config)], budget,
            n_trials, spec.seed, n_jobs, cache)
        p = budget.transmit_power
        p_bc = power_bc_uniform(power_params, bc_geometry, theta, p)
        p_ec = power_ec(power_params, n_s, p)
        rows.append({
            "axis": float(value),
            "mean_se": se_bc,
            "se_std_error": err_bc,
            "bound_se": se_upper_bound_bc(bc_geometry, bc_config, budget),
            "bound_ec": se_upper_bound_ec(bc_geometry,
                                          ec_config.reflection_phases,
                                          budget),
            "bound_conventional": se_upper_bound_bc(
                bc_geometry, conventional_configuration(bc_geometry),
                budget),
            "mean_se_ec": se_ec,
            "se_std_error_ec": err_ec,
            "power_bc": p_bc,
            "power_ec": p_ec,
            "k_star": k,
            "mean_ee_bc": energy_efficiency(se_bc, p_bc),
            "mean_ee_ec": energy_efficiency(se_ec, p_ec),
        })
        logger.debug("%s=%s: K=%d SE_BC=%.6g SE_EC=%.6g P_BC=%.6g "
                     "P_EC=%.6g", spec.axis, value, k, se_bc, se_ec, p_bc,
                     p_ec)

    def column(name):
        return tuple(row[name] for row in rows)

    return SweepResult(
        axis_name=spec.axis, axis_values=column("axis"),
        mean_se=column("mean_se"), se_std_error=column("se_std_error"),
        bound_se=column("bound_se"), mean_ee_bc=column("mean_ee_bc"),
        mean_ee_ec=column("mean_ee_ec"), n_trials=n_trials,
        seed=spec.seed, bound_ec=column("bound_ec"),
        bound_conventional=column("bound_conventional"),
        mean_se_ec=column("mean_se_ec"),
        se_std_error_ec=column("se_std_error_ec"),
        power_ec=column("power_ec"), power_bc=column("power_bc"),
        k_star=column("k_star"))


def run_snr_sweep(geometry: SystemGeometry, power_params: PowerParams,
                  snr_grid: Sequence[float], n_trials: int, seed: int,
                  noise_power: float = 1.0, segmentation: str = "optimal",
                  n_jobs: Optional[int] = None) -> SweepResult:
    """
    :func:`run_sweep` over SNR values in dB.
    """
    spec = SweepSpec(axis="snr", grid=tuple(float(v) for v in snr_grid),
                     n_trials=n_trials, seed=seed, noise_power=noise_power,
                     segmentation=segmentation)
    return run_sweep(geometry, power_params, spec, n_jobs)


def bound_tightness_study(
        geometry_family: Union[SystemGeometry, Sequence[SystemGeometry]],
        kappa_grid: Sequence[float], n_trials: int, seed: int,
        budget: Optional[LinkBudget] = None,
        n_jobs: Optional[int] = None) -> pd.DataFrame:
    """
    Gap between the averaged-SE bound and the Monte Carlo mean for every
    geometry of the family and every ``kappa`` (applied to both hops),
    under the optimal rotatable design.

    :param geometry_family: One geometry or several, e.g. with different N_s.
    :param kappa_grid: Ascending Rician factors.
    :param budget: Link budget; 10 dB SNR when omitted.

    :raises rotatable_ris.utils.RisError: If the grid is empty or not
        ascending.

    :return: Columns ``n_elements``, ``n_blocks``, ``kappa``, ``bound_se``,
        ``mean_se``, ``se_std_error``, ``gap`` and ``relative_gap``
        (gap over bound, 0 where the bound is 0, i.e. at zero transmit
        power).
    """
    if isinstance(geometry_family, SystemGeometry):
        geometry_family = [geometry_family]
    kappas = [float(k) for k in kappa_grid]
    if not kappas or any(b < a for a, b in zip(kappas, kappas[1:])):
        raise RisError({"error_code": "invalid-argument",
                        "msg": "kappa_grid must be nonempty and ascending."})
    n_trials = _check_trials(n_trials)
    if budget is None:
        budget = LinkBudget.from_snr_db(10.0)

    rows = []
    for geometry in geometry_family:
        for kappa in kappas:
            point = geometry.with_kappa(kappa, kappa)
            config = optimal_configuration(point)
            bound = se_upper_bound_bc(point, config, budget)
            mean, err = estimate_average_se(point, config, budget, n_trials,
                                            seed, n_jobs)
            rows.append({"n_elements": point.n_ris_elements,
                         "n_blocks": point.n_blocks, "kappa": kappa,
                         "bound_se": bound, "mean_se": mean,
                         "se_std_error": err, "gap": bound - mean,
                         "relative_gap": (bound - mean) / bound if bound
                         else 0.0})
    return pd.DataFrame(rows, columns=["n_elements", "n_blocks", "kappa",
                                       "bound_se", "mean_se", "se_std_error",
                                       "gap", "relative_gap"])
