"""
Instantaneous SE under MRT, the averaged-SE upper bound of block- and
element-controlled surfaces, the SE gap between them and EE.

The bound is evaluated through its complex double sum instead of a closed
form of the inner geometric series, so it stays valid for arbitrary
per-block rotations. Angles are not reduced modulo 2 pi; the complex
exponentials take care of periodicity.
"""
import math
from typing import Sequence

import numpy as np

from .channel import cascaded_row
from .design import optimal_phases
from .models import LinkBudget, RisConfiguration, SeBoundTerms,\
                    SystemGeometry
from .utils import RisError, ensure_length


def mrt_precoder(h: np.ndarray) -> np.ndarray:
    """
    Maximum ratio transmission precoder ``h / ||h||``.

    :raises rotatable_ris.utils.RisError: ``degenerate-channel`` if ``h`` is
        the zero vector.
    """
    h = np.asarray(h, dtype=complex)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise RisError({"error_code": "degenerate-channel",
                        "msg": "MRT is undefined for a zero channel."})
    return h / norm


def channel_gain(bs_ris: np.ndarray, ris_ue: np.ndarray,
                 reflection_vector: np.ndarray) -> float:
    """
    ``||g^T diag(v) G||^2``, the received SNR per unit of P / sigma^2
    under MRT.
    """
    row = cascaded_row(bs_ris, ris_ue, reflection_vector)
    return float(np.vdot(row, row).real)


def se_instantaneous(bs_ris: np.ndarray, ris_ue: np.ndarray,
                     reflection_vector: np.ndarray,
                     budget: LinkBudget) -> float:
    """
    Downlink SE in bits/s/Hz of one channel realization with MRT,
    ``log2(1 + P / sigma^2 * ||g^T diag(v) G||^2)``.

    :raises rotatable_ris.utils.RisError: On inconsistent dimensions.
    """
    gain = channel_gain(bs_ris, ris_ue, reflection_vector)
    return math.log2(1 + budget.snr * gain)


def bound_terms(geometry: SystemGeometry,
                config: RisConfiguration) -> SeBoundTerms:
    """
    Constants and angles of the averaged-SE upper bound for ``config``.

    :raises rotatable_ris.utils.RisError: If ``config`` does not have one
        entry per block.
    """
    ensure_length("rotation_angles", config.rotation_angles,
                  geometry.n_blocks)
    ensure_length("reflection_phases", config.reflection_phases,
                  geometry.n_blocks)
    k1 = geometry.rician_bs_ris
    k2 = geometry.rician_ris_ue
    n_b = geometry.n_bs_antennas
    n_s = geometry.n_ris_elements
    block_size = geometry.block_size
    if geometry.los_only:
        c1, c2 = float(n_b), 0.0
    else:
        c1 = n_b * k1 * k2 / ((k1 + 1) * (k2 + 1))
        c2 = n_b * n_s * (k2 + k1 + 1) / ((k1 + 1) * (k2 + 1))

    phi_a = geometry.aoa_ris
    phi_d = geometry.aod_ris
    k = np.arange(1, geometry.n_blocks + 1)
    gamma = np.asarray(config.reflection_phases, dtype=float)
    r1 = gamma + (k - 1) * block_size * np.pi * (np.cos(phi_d) +
                                                 np.cos(phi_a))

    theta = np.asarray(config.rotation_angles, dtype=float)
    i = np.arange(1, block_size + 1)
    specular = np.cos(phi_d - theta) + np.cos(phi_a - theta)
    r2 = np.outer(specular, np.pi / 2 * (block_size - 2 * i + 1))

    return SeBoundTerms(c1=c1, c2=c2, r1=tuple(r1.tolist()),
                        r2=tuple(tuple(row) for row in r2.tolist()))


def _bound_from_terms(terms: SeBoundTerms, budget: LinkBudget) -> float:
    coherent = abs(terms.coherent_sum()) ** 2
    return math.log2(1 + budget.snr * (terms.c1 * coherent + terms.c2))


def se_upper_bound_bc(geometry: SystemGeometry, config: RisConfiguration,
                      budget: LinkBudget) -> float:
    """
    Jensen upper bound on the averaged SE of the rotatable BC-RIS,
    ``log2(1 + P / sigma^2 (C1 |sum_k e^{j R1_k} sum_i e^{-j R2_ki}|^2 +
    C2))``.
    """
    return _bound_from_terms(bound_terms(geometry, config), budget)


def se_upper_bound_ec(geometry: SystemGeometry, phases: Sequence[float],
                      budget: LinkBudget) -> float:
    """
    The same bound for the element-controlled surface: ``geometry`` is
    re-segmented into N_s blocks of one element, ``phases`` holds one phase
    per element.

    :raises rotatable_ris.utils.RisError: If ``phases`` is not of length
        N_s.
    """
    ensure_length("phases", phases, geometry.n_ris_elements)
    ec_geometry = geometry.element_controlled()
    config = RisConfiguration(
        rotation_angles=(0.0,) * ec_geometry.n_blocks,
        reflection_phases=tuple(phases))
    return se_upper_bound_bc(ec_geometry, config, budget)


def se_gap(geometry: SystemGeometry, rotations: Sequence[float],
           budget: LinkBudget) -> float:
    """
    Averaged-SE loss of the BC-RIS rotated by ``rotations`` with respect to
    the EC-RIS, both with their optimal reflection phases. Computed as the
    difference of the two bound evaluations.
    """
    ensure_length("rotations", rotations, geometry.n_blocks)
    ec_phases = optimal_phases(geometry.element_controlled())
    bc_config = RisConfiguration(rotation_angles=tuple(rotations),
                                 reflection_phases=optimal_phases(geometry))
    return se_upper_bound_ec(geometry, ec_phases, budget) -\
        se_upper_bound_bc(geometry, bc_config, budget)


def se_gap_closed_form(geometry: SystemGeometry, rotations: Sequence[float],
                       budget: LinkBudget) -> float:
    """
    Single-log form of the SE gap under optimal phases,
    ``log2((P (C1 N_s^2 + C2) + s2) / (P (C1 |sum_k sum_i e^{-j R2_ki}|^2 +
    C2) + s2))``. For a common rotation the inner magnitude is
    ``K^2 |sum_i e^{-j R2_i}|^2``.
    """
    ensure_length("rotations", rotations, geometry.n_blocks)
    terms = bound_terms(geometry, RisConfiguration(
        rotation_angles=tuple(rotations),
        reflection_phases=(0.0,) * geometry.n_blocks))
    rotated = abs(np.exp(-1j * np.asarray(terms.r2)).sum()) ** 2
    p = budget.transmit_power
    s2 = budget.noise_power
    n_s = geometry.n_ris_elements
    numerator = p * (terms.c1 * n_s ** 2 + terms.c2) + s2
    denominator = p * (terms.c1 * rotated + terms.c2) + s2
    return math.log2(numerator / denominator)


def energy_efficiency(se: float, total_power: float) -> float:
    """
    EE in bits/s/Hz per watt.

    :raises rotatable_ris.utils.RisError: If ``total_power`` is not
        positive.
    """
    if not total_power > 0:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "total_power must be > 0, got " +
                               str(total_power) + "."})
    return se / total_power
