"""
Total power consumption of element-controlled and rotatable
block-controlled surfaces.

Rotating a block of M elements by |theta| costs
``(M^2 - 1) / 4 * |theta| * P_unit``. For odd M this equals the discrete sum
``2 * sum_{m=0}^{(M-1)/2} m``; the closed form is used for every M.
Rotation power is charged once for the commanded angle of a static
deployment.
"""
from typing import Sequence

import numpy as np

from .models import PowerParams, SystemGeometry
from .utils import ensure_length


def rotation_lever(block_size: int) -> float:
    """
    Sum of element distances from the rotation center of one block,
    ``(M^2 - 1) / 4``.
    """
    return (block_size ** 2 - 1) / 4


def power_ec(params: PowerParams, n_elements: int,
             transmit_power: float) -> float:
    """
    ``P0 + xi P + N_s P1``.
    """
    return params.static_power + params.amplifier_slope * transmit_power +\
        n_elements * params.phase_circuit_power


def power_bc(params: PowerParams, geometry: SystemGeometry,
             rotations: Sequence[float], transmit_power: float) -> float:
    """
    ``P0 + xi P + K (P1 + P2) + sum_k (M^2 - 1) / 4 |theta_k| P_unit``.

    M = 1 is not special-cased: pass ``params.without_rotation()`` to model
    a surface without the rotation mechanism.

    :raises rotatable_ris.utils.RisError: If ``rotations`` does not have one
        entry per block.
    """
    ensure_length("rotations", rotations, geometry.n_blocks)
    circuits = geometry.n_blocks * (params.phase_circuit_power +
                                    params.rotate_circuit_power)
    travel = float(np.sum(np.abs(np.asarray(rotations, dtype=float))))
    rotation = rotation_lever(geometry.block_size) * travel *\
        params.unit_rotation_power
    return params.static_power + params.amplifier_slope * transmit_power +\
        circuits + rotation


def power_bc_uniform(params: PowerParams, geometry: SystemGeometry,
                     theta: float, transmit_power: float) -> float:
    """
    BC-RIS power when every block is rotated by ``theta``:
    ``P0 + xi P + K (P1 + P2) + K (M^2 - 1) / 4 |theta| P_unit``.
    """
    return segmented_power(params, geometry.n_blocks, geometry.block_size,
                           theta, transmit_power)


def segmented_power(params: PowerParams, n_blocks: int, block_size: int,
                    theta: float, transmit_power: float = 0.0) -> float:
    """
    :func:`power_bc_uniform` for a bare ``(K, M)`` pair, as used by the
    segmentation search.
    """
    circuits = n_blocks * (params.phase_circuit_power +
                           params.rotate_circuit_power)
    rotation = n_blocks * rotation_lever(block_size) * abs(theta) *\
        params.unit_rotation_power
    return params.static_power + params.amplifier_slope * transmit_power +\
        circuits + rotation
