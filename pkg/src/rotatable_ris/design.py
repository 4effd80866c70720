"""
Closed-form designers of the rotatable BC-RIS: reflection phases that make
the blocks add up coherently, the common rotation that turns every block
into a specular reflector, the number of blocks minimizing the power
consumption and the P2 rule deciding whether the BC-RIS beats the EC-RIS
in EE.
"""
import bisect
from functools import lru_cache
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .models import Branch, FeasibilityVerdict, PowerParams, Regime,\
                    RisConfiguration, SegmentationResult, SystemGeometry
from .power import power_ec, segmented_power
from .utils import RisError, ensure_finite, get_setting

logger = logging.getLogger(__name__)

MAX_ROTATION = math.pi / 6
MAX_BRUTE_FORCE_ELEMENTS = 2 ** 20
BOUNDARY_TOLERANCE = 1e-9


def wrap_phase(phase: float) -> float:
    """
    Map ``phase`` into (-pi, pi].
    """
    return math.pi - (math.pi - phase) % (2 * math.pi)


def optimal_phases(geometry: SystemGeometry) -> Tuple[float, ...]:
    """
    Reflection phases ``gamma_k = -(k - 1) M pi (cos aod + cos aoa)``,
    wrapped to (-pi, pi]. For an EC-RIS pass
    ``geometry.element_controlled()``.

    :param geometry: Segmentation and RIS angles.

    :return: One phase per block.
    """
    spread = geometry.block_size * math.pi * (math.cos(geometry.aod_ris) +
                                              math.cos(geometry.aoa_ris))
    return tuple(wrap_phase(-k * spread) for k in range(geometry.n_blocks))


def optimal_rotation(aoa: float, aod: float) -> float:
    """
    Common rotation ``(aod + aoa) / 2 - pi / 2`` that aligns AoA and AoD
    specularly for every block.
    """
    ensure_finite("aoa", aoa)
    ensure_finite("aod", aod)
    return (aod + aoa) / 2 - math.pi / 2


def optimal_configuration(geometry: SystemGeometry) -> RisConfiguration:
    """
    Optimal phases and the specular rotation on every block.
    """
    theta = optimal_rotation(geometry.aoa_ris, geometry.aod_ris)
    return RisConfiguration.uniform(theta, optimal_phases(geometry))


def conventional_configuration(geometry: SystemGeometry) -> RisConfiguration:
    """
    Optimal phases on blocks that cannot rotate.
    """
    return RisConfiguration.uniform(0.0, optimal_phases(geometry))


def element_controlled_configuration(
        geometry: SystemGeometry) -> RisConfiguration:
    """
    Optimal per-element phases of the EC-RIS counterpart of ``geometry``.
    """
    return conventional_configuration(geometry.element_controlled())


@lru_cache(maxsize=256)
def _divisors(n: int) -> Tuple[int, ...]:
    divs = {1, n}
    for i in range(2, math.isqrt(n) + 1):
        if n % i == 0:
            divs.update((i, n // i))
    return tuple(sorted(divs))


def divisors(n: int) -> List[int]:
    """
    Admissible block counts of a surface with ``n`` elements, ascending.

    :raises rotatable_ris.utils.RisError: If ``n`` is not a positive
        integer.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_elements must be a positive integer, " +
                               "got " + str(n) + "."})
    return list(_divisors(int(n)))


def _check_sector(theta: float):
    ensure_finite("theta", theta)
    if abs(theta) > MAX_ROTATION * (1 + 1e-12):
        raise RisError({"error_code": "out-of-sector",
                        "msg": "|theta| must not exceed pi/6, got " +
                               str(theta) + "."})


def interior_block_count(p_ratio: float, n_elements: int,
                         theta: float) -> float:
    """
    Stationary block count ``sqrt(N_s^2 |theta| / (4 P_ratio - |theta|))``
    of the interior branch.
    """
    return math.sqrt(n_elements ** 2 * abs(theta) /
                     (4 * p_ratio - abs(theta)))


def continuous_block_count(p_ratio: float, n_elements: int,
                           theta: float) -> Tuple[float, Branch]:
    """
    Piecewise closed-form block count before integer rounding.

    :return: The count and the branch it comes from.
    """
    theta = abs(theta)
    if n_elements == 1 or math.isinf(p_ratio):
        return 1.0, Branch.SINGLE_BLOCK
    if theta >= 0.8 * p_ratio:
        return n_elements / 2, Branch.FULL_SPLIT
    if theta <= 4 * p_ratio / (n_elements ** 2 + 1):
        return 1.0, Branch.SINGLE_BLOCK
    return interior_block_count(p_ratio, n_elements, theta), Branch.INTERIOR


def _neighbours(divs: List[int], value: float) -> List[int]:
    i = bisect.bisect_left(divs, value)
    return divs[max(i - 1, 0):i + 1]


def _cheapest(params: PowerParams, n_elements: int, theta: float,
              candidates) -> Tuple[int, float]:
    best = None
    for k in sorted(set(candidates)):
        power = segmented_power(params, k, n_elements // k, theta)
        # ties go to the larger K
        if best is None or power <= best[1]:
            best = (k, power)
    return best


def optimal_block_count(params: PowerParams, n_elements: int,
                        theta: float) -> SegmentationResult:
    """
    Number of blocks minimizing the BC-RIS power for a common rotation
    ``theta``. The closed-form count is rounded to the cheaper of the
    neighbouring divisors of N_s; when the closed form is capped at N_s / 2
    the uncapped stationary point is checked as well, so the result always
    matches :func:`brute_force_block_count`.

    :param params: Power coefficients.
    :param n_elements: N_s.
    :param theta: Common rotation angle in radians.

    :raises rotatable_ris.utils.RisError: ``out-of-sector`` if
        ``|theta| > pi / 6``.

    :return: The segmentation with its power at zero transmit power.
    """
    _check_sector(theta)
    divs = divisors(n_elements)
    p_ratio = params.p_ratio
    continuous_k, branch = continuous_block_count(p_ratio, n_elements, theta)

    candidates = _neighbours(divs, continuous_k)
    if params.unit_rotation_power > 0 and n_elements > 1:
        circuits = params.phase_circuit_power + params.rotate_circuit_power
        slope = circuits - abs(theta) * params.unit_rotation_power / 4
        curvature = n_elements ** 2 * abs(theta) *\
            params.unit_rotation_power / 4
        if slope <= 0:
            candidates.append(n_elements)
        elif curvature > 0:
            candidates += _neighbours(divs, math.sqrt(curvature / slope))
        else:
            candidates += [1, n_elements]
    else:
        candidates += [1, n_elements]

    chosen_k, power = _cheapest(params, n_elements, theta, candidates)
    logger.debug("N_s=%d theta=%.6g: K*=%.6g (%s), chosen K=%d",
                 n_elements, theta, continuous_k, branch.value, chosen_k)
    return SegmentationResult(continuous_k=continuous_k, chosen_k=chosen_k,
                              chosen_m=n_elements // chosen_k,
                              power_at_chosen=power, branch=branch,
                              p_ratio=p_ratio)


def brute_force_block_count(params: PowerParams, n_elements: int,
                            theta: float) -> SegmentationResult:
    """
    Exhaustive search over every divisor of N_s; ties go to the larger K.
    ``continuous_k`` is the chosen count itself.

    :raises rotatable_ris.utils.RisError: If ``n_elements`` exceeds 2^20.
    """
    if n_elements > MAX_BRUTE_FORCE_ELEMENTS:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_elements must not exceed 2^20 for the " +
                               "exhaustive search."})
    chosen_k, power = _cheapest(params, n_elements, theta,
                                divisors(n_elements))
    _, branch = continuous_block_count(params.p_ratio, n_elements, theta)
    return SegmentationResult(continuous_k=float(chosen_k),
                              chosen_k=chosen_k,
                              chosen_m=n_elements // chosen_k,
                              power_at_chosen=power, branch=branch,
                              p_ratio=params.p_ratio)


def unit_power_full_split_threshold(params: PowerParams) -> float:
    """
    P_unit at or above which the largest rotation falls into the
    full-split branch, ``24 (P1 + P2) / (5 pi)``.
    """
    circuits = params.phase_circuit_power + params.rotate_circuit_power
    return 24 * circuits / (5 * math.pi)


def unit_power_single_block_threshold(params: PowerParams,
                                      n_elements: int) -> float:
    """
    P_unit at or below which a single block is optimal for every rotation
    in the sector, ``24 (P1 + P2) / (pi (N_s^2 + 1))``.
    """
    circuits = params.phase_circuit_power + params.rotate_circuit_power
    return 24 * circuits / (math.pi * (n_elements ** 2 + 1))


def classify_regime(params: PowerParams,
                    n_elements: int) -> Tuple[Regime, bool]:
    """
    P_unit range of the feasibility rule. A P_unit on a boundary gets the
    range below it.

    :return: The regime and whether P_unit sits on a boundary.
    """
    if n_elements < 2:
        return Regime.NONE, False
    p_unit = params.unit_rotation_power
    upper = unit_power_full_split_threshold(params)
    lower = unit_power_single_block_threshold(params, n_elements)
    if math.isclose(p_unit, lower, rel_tol=BOUNDARY_TOLERANCE):
        return Regime.SINGLE_BLOCK, True
    if math.isclose(p_unit, upper, rel_tol=BOUNDARY_TOLERANCE):
        return Regime.INTERIOR, True
    if p_unit > upper:
        return Regime.FULL_SPLIT, False
    if p_unit > lower:
        return Regime.INTERIOR, False
    return Regime.SINGLE_BLOCK, False


def p2_inequality(params: PowerParams, n_elements: int,
                  regime: Regime) -> bool:
    """
    Closed-form condition on P2 under which the BC-RIS consumes less power
    than the EC-RIS in ``regime``.
    """
    p1 = params.phase_circuit_power
    p2 = params.rotate_circuit_power
    p_unit = params.unit_rotation_power
    if regime is Regime.FULL_SPLIT:
        return p2 < p1 - math.pi * p_unit / 8
    if regime is Regime.INTERIOR:
        return p2 < (p_unit - 12 * p1 / math.pi) ** 2 * math.pi /\
            (24 * p_unit)
    if regime is Regime.SINGLE_BLOCK:
        return p2 < (n_elements - 1) * p1 -\
            (n_elements ** 2 - 1) * math.pi * p_unit / 24
    return False


def worst_case_bc_power(params: PowerParams, n_elements: int,
                        grid_points: Optional[int] = None) -> float:
    """
    Largest optimally segmented BC-RIS power over a uniform grid of
    ``|theta|`` in [0, pi / 6] (endpoints included), at zero transmit
    power. All divisors are evaluated on the whole grid at once; the
    result equals taking :func:`optimal_block_count` at every grid point.
    """
    if grid_points is None:
        grid_points = get_setting("RIS_FEASIBILITY_GRID_POINTS")
    thetas = np.linspace(0.0, MAX_ROTATION, int(grid_points) + 1)
    k = np.asarray(divisors(n_elements), dtype=float)[:, None]
    m = n_elements / k
    circuits = params.phase_circuit_power + params.rotate_circuit_power
    table = params.static_power + k * circuits +\
        k * (m ** 2 - 1) / 4 * thetas[None, :] * params.unit_rotation_power
    return float(table.min(axis=0).max())


def p2_feasibility(params: PowerParams, n_elements: int,
                   grid_points: Optional[int] = None) -> FeasibilityVerdict:
    """
    Decide whether the optimally segmented BC-RIS consumes less power than
    the EC-RIS for every rotation in the sector.

    ``feasible`` is the grid-verified verdict ``margin > 0`` with
    ``margin = P_EC - max_theta P_BC``; the transmit power terms cancel.
    ``inequality_holds`` is the closed-form P2 condition of the regime.
    Disagreements and boundary cases are logged.

    :param params: Power coefficients.
    :param n_elements: N_s.
    :param grid_points: Number of grid intervals over [0, pi / 6];
        defaults to ``RIS_FEASIBILITY_GRID_POINTS``.
    """
    regime, near_boundary = classify_regime(params, n_elements)
    holds = p2_inequality(params, n_elements, regime)
    worst = worst_case_bc_power(params, n_elements, grid_points)
    margin = power_ec(params, n_elements, 0.0) - worst
    verdict = FeasibilityVerdict(regime=regime, feasible=margin > 0,
                                 margin=margin, inequality_holds=holds,
                                 near_boundary=near_boundary)
    if near_boundary:
        logger.warning("P_unit=%.12g lies on a regime boundary, reported "
                       "as %s.", params.unit_rotation_power, regime.value)
    if verdict.discrepancy:
        logger.warning("P2 rule says %s but the margin is %.12g W "
                       "(P2=%.12g, P_unit=%.12g, N_s=%d).",
                       "feasible" if holds else "infeasible", margin,
                       params.rotate_circuit_power,
                       params.unit_rotation_power, n_elements)
    return verdict
