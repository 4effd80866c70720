"""
LoS array responses and Rician channel draws for a RIS made of rotatable
blocks.

Block elements are indexed ``m = 1..M`` internally so the local phase
``(m - (M + 1) / 2) * pi * cos(angle - theta_k)`` keeps its textbook form;
entry ``(k - 1) * M + (m - 1)`` of a length-N_s vector is element ``m`` of
block ``k``. For even M the rotation center sits between two elements.
"""
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from .models import ChannelRealization, RisConfiguration, SystemGeometry
from .utils import RisError, ensure_finite, ensure_length


def bs_array_response(aod: float, n_antennas: int) -> np.ndarray:
    """
    Normalized ULA response at the BS, entry ``m`` (0-indexed) equal to
    ``exp(j m pi cos(aod)) / sqrt(n_antennas)``.

    :param aod: Angle of departure in radians.
    :param n_antennas: Number of antennas.

    :raises rotatable_ris.utils.RisError: For a non-finite angle or an
        antenna count below one.

    :return: Complex vector of unit norm.
    """
    ensure_finite("aod", aod)
    if n_antennas < 1:
        raise RisError({"error_code": "invalid-argument",
                        "msg": "n_antennas must be >= 1, got " +
                               str(n_antennas) + "."})
    m = np.arange(n_antennas)
    return np.exp(1j * m * np.pi * np.cos(aod)) / np.sqrt(n_antennas)


def ris_array_response(angle: float, rotations: Sequence[float],
                       geometry: SystemGeometry) -> np.ndarray:
    """
    Normalized response of the segmented RIS towards ``angle`` when block
    ``k`` is rotated by ``rotations[k]``. The phase of element ``m`` of
    block ``k`` is the global term ``(k - 1) M pi cos(angle)`` plus the
    local term ``(m - (M + 1) / 2) pi cos(angle - theta_k)``.

    :param angle: AoA or AoD at the RIS in radians.
    :param rotations: Rotation angle per block, length K.
    :param geometry: Segmentation of the surface.

    :raises rotatable_ris.utils.RisError: If ``rotations`` does not have
        one entry per block.

    :return: Complex vector of length N_s and unit norm.
    """
    ensure_finite("angle", angle)
    ensure_length("rotations", rotations, geometry.n_blocks)
    theta = np.asarray(rotations, dtype=float)
    k = np.arange(1, geometry.n_blocks + 1)
    m = np.arange(1, geometry.block_size + 1)
    block_size = geometry.block_size

    global_phase = (k - 1) * block_size * np.pi * np.cos(angle)
    local_phase = np.outer(np.cos(angle - theta),
                           (m - (block_size + 1) / 2) * np.pi)
    phase = global_phase[:, None] + local_phase
    return np.exp(1j * phase).ravel() / np.sqrt(geometry.n_ris_elements)


def build_reflection_vector(config: RisConfiguration,
                            geometry: SystemGeometry) -> np.ndarray:
    """
    Expand the per-block phases into the length-N_s reflection vector, every
    element of block ``k`` carrying ``exp(j gamma_k)``.

    :raises rotatable_ris.utils.RisError: If the configuration does not have
        one phase per block.
    """
    ensure_length("reflection_phases", config.reflection_phases,
                  geometry.n_blocks)
    phases = np.asarray(config.reflection_phases, dtype=float)
    return np.kron(np.exp(1j * phases), np.ones(geometry.block_size))


def los_components(geometry: SystemGeometry,
                   rotations: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Deterministic parts of both hops, ``(G_bar, g_bar)`` with
    ``G_bar = sqrt(N_b N_s) a_s(aoa, theta) a_b(aod_bs)^H`` and
    ``g_bar = sqrt(N_s) a_s(aod, theta)``.
    """
    a_s_in = ris_array_response(geometry.aoa_ris, rotations, geometry)
    a_s_out = ris_array_response(geometry.aod_ris, rotations, geometry)
    a_b = bs_array_response(geometry.aod_bs, geometry.n_bs_antennas)
    scale = math.sqrt(geometry.n_bs_antennas * geometry.n_ris_elements)
    bs_ris = scale * np.outer(a_s_in, a_b.conj())
    ris_ue = math.sqrt(geometry.n_ris_elements) * a_s_out
    return bs_ris, ris_ue


def complex_gaussian(shape, rng: np.random.Generator) -> np.ndarray:
    """
    CN(0, 1) samples: real and imaginary parts are N(0, 1/2), drawn in that
    order from ``rng.standard_normal``.
    """
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return (real + 1j * imag) / np.sqrt(2.0)


def sample_channels(geometry: SystemGeometry, rotations: Sequence[float],
                    rng_stream: np.random.Generator,
                    los: Optional[Tuple[np.ndarray, np.ndarray]] = None
                    ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw one Rician pair ``(G, g)``. ``G`` mixes its LoS part with an i.i.d.
    CN(0, 1) matrix using ``rician_bs_ris``; ``g`` does the same with
    ``rician_ris_ue``. In LoS-only mode the LoS parts are returned as they
    are and the stream is left untouched.

    :param geometry: Geometry and Rician factors.
    :param rotations: Rotation angle per block.
    :param rng_stream: Source of the NLoS draws; ``G`` is drawn before
        ``g``.
    :param los: Precomputed ``los_components(geometry, rotations)`` to skip
        recomputing them in Monte Carlo loops.

    :return: ``(G, g)`` with shapes (N_s, N_b) and (N_s,).
    """
    if los is None:
        los = los_components(geometry, rotations)
    bs_ris_los, ris_ue_los = los
    if geometry.los_only:
        return bs_ris_los.copy(), ris_ue_los.copy()

    k1 = geometry.rician_bs_ris
    k2 = geometry.rician_ris_ue
    shape = (geometry.n_ris_elements, geometry.n_bs_antennas)
    bs_ris_nlos = complex_gaussian(shape, rng_stream)
    ris_ue_nlos = complex_gaussian(geometry.n_ris_elements, rng_stream)

    bs_ris = math.sqrt(k1 / (k1 + 1)) * bs_ris_los +\
        math.sqrt(1 / (k1 + 1)) * bs_ris_nlos
    ris_ue = math.sqrt(k2 / (k2 + 1)) * ris_ue_los +\
        math.sqrt(1 / (k2 + 1)) * ris_ue_nlos
    return bs_ris, ris_ue


def cascaded_row(bs_ris: np.ndarray, ris_ue: np.ndarray,
                 reflection_vector: np.ndarray) -> np.ndarray:
    """
    The row vector ``g^T diag(v) G`` (that is, ``h^H``).

    :raises rotatable_ris.utils.RisError: On inconsistent dimensions.
    """
    bs_ris = np.asarray(bs_ris)
    ris_ue = np.asarray(ris_ue)
    reflection_vector = np.asarray(reflection_vector)
    if bs_ris.ndim != 2 or ris_ue.shape != (bs_ris.shape[0],) or\
            reflection_vector.shape != (bs_ris.shape[0],):
        raise RisError({"error_code": "invalid-argument",
                        "msg": "Inconsistent dimensions: G " +
                               str(bs_ris.shape) + ", g " +
                               str(ris_ue.shape) + ", v " +
                               str(reflection_vector.shape) + "."})
    return (ris_ue * reflection_vector) @ bs_ris


def effective_channel(bs_ris: np.ndarray, ris_ue: np.ndarray,
                      reflection_vector: np.ndarray) -> np.ndarray:
    """
    The BS-UE channel ``h`` such that ``h^H = g^T diag(v) G``.

    :raises rotatable_ris.utils.RisError: On inconsistent dimensions.

    :return: Complex vector of length N_b.
    """
    return cascaded_row(bs_ris, ris_ue, reflection_vector).conj()


def realize(geometry: SystemGeometry, config: RisConfiguration,
            rng_stream: np.random.Generator) -> ChannelRealization:
    """
    Draw a channel pair for ``config`` and bundle it with the cascaded
    channel it yields.
    """
    bs_ris, ris_ue = sample_channels(geometry, config.rotation_angles,
                                     rng_stream)
    reflection = build_reflection_vector(config, geometry)
    return ChannelRealization(
        bs_ris_matrix=bs_ris,
        ris_ue_vector=ris_ue,
        effective_channel=effective_channel(bs_ris, ris_ue, reflection))


def trial_stream(seed: int, trial: int) -> np.random.Generator:
    """
    Independent Philox stream of trial ``trial`` under the 64-bit
    ``seed``. The stream depends on nothing but the pair, so trials can be
    evaluated in any order or on any worker.
    """
    sequence = np.random.SeedSequence(entropy=int(seed) & (2 ** 64 - 1),
                                      spawn_key=(int(trial),))
    return np.random.Generator(np.random.Philox(sequence))
