"""
Value types shared by the numerical modules, the config layer and the
commands. All of them are immutable; vectors are stored as tuples and
converted to numpy arrays where the computation needs them.
"""
from dataclasses import dataclass, replace
import enum
import math
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .utils import RisError, ensure_finite


def _check_angle(name: str, value: float):
    ensure_finite(name, value)
    if not 0.0 <= value <= math.pi:
        raise RisError({"error_code": "invalid-argument",
                        "msg": name + " must lie in [0, pi], got " +
                               str(value) + "."})


def _check_nonnegative(name: str, value: float):
    ensure_finite(name, value)
    if value < 0:
        raise RisError({"error_code": "invalid-argument",
                        "msg": name + " must be >= 0, got " + str(value) +
                               "."})


def _check_positive_int(name: str, value: int):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer))\
            or value < 1:
        raise RisError({"error_code": "invalid-argument",
                        "msg": name + " must be a positive integer, got " +
                               str(value) + "."})


@dataclass(frozen=True)
class SystemGeometry:
    """
    Array sizes, block segmentation, LoS angles and Rician factors of a
    BS-RIS-UE link. Angles are radians measured from the left end of the
    arrays.

    :param n_bs_antennas: Number of BS antennas.
    :param n_ris_elements: Number of RIS elements, equal to
        ``n_blocks * block_size``.
    :param n_blocks: Number of rotatable blocks.
    :param block_size: Elements per block.
    :param aoa_ris: Angle of arrival at the RIS.
    :param aod_ris: Angle of departure at the RIS towards the UE.
    :param aod_bs: Angle of departure at the BS towards the RIS.
    :param rician_bs_ris: Rician factor of the BS-RIS channel.
    :param rician_ris_ue: Rician factor of the RIS-UE channel.
    :param los_only: Drop the NLoS components entirely (infinite Rician
        factors without the overflow).
    """
    n_bs_antennas: int
    n_ris_elements: int
    n_blocks: int
    block_size: int
    aoa_ris: float
    aod_ris: float
    aod_bs: float
    rician_bs_ris: float
    rician_ris_ue: float
    los_only: bool = False

    def __post_init__(self):
        _check_positive_int("n_bs_antennas", self.n_bs_antennas)
        _check_positive_int("n_ris_elements", self.n_ris_elements)
        _check_positive_int("n_blocks", self.n_blocks)
        _check_positive_int("block_size", self.block_size)
        if self.n_blocks * self.block_size != self.n_ris_elements:
            raise RisError({"error_code": "invalid-argument",
                            "msg": "n_ris_elements must equal n_blocks * " +
                                   "block_size (" + str(self.n_blocks) +
                                   " * " + str(self.block_size) + " != " +
                                   str(self.n_ris_elements) + ")."})
        _check_angle("aoa_ris", self.aoa_ris)
        _check_angle("aod_ris", self.aod_ris)
        _check_angle("aod_bs", self.aod_bs)
        _check_nonnegative("rician_bs_ris", self.rician_bs_ris)
        _check_nonnegative("rician_ris_ue", self.rician_ris_ue)

    def with_blocks(self, n_blocks: int) -> "SystemGeometry":
        """
        Re-segment the same surface into ``n_blocks`` blocks.
        """
        if n_blocks < 1 or self.n_ris_elements % n_blocks:
            raise RisError({"error_code": "invalid-argument",
                            "msg": "K must divide N_s (K=" + str(n_blocks) +
                                   ", N_s=" + str(self.n_ris_elements) +
                                   ")."})
        return replace(self, n_blocks=n_blocks,
                       block_size=self.n_ris_elements // n_blocks)

    def with_elements(self, n_ris_elements: int,
                      n_blocks: int) -> "SystemGeometry":
        if n_blocks < 1 or n_ris_elements % n_blocks:
            raise RisError({"error_code": "invalid-argument",
                            "msg": "K must divide N_s (K=" + str(n_blocks) +
                                   ", N_s=" + str(n_ris_elements) + ")."})
        return replace(self, n_ris_elements=n_ris_elements,
                       n_blocks=n_blocks,
                       block_size=n_ris_elements // n_blocks)

    def with_kappa(self, rician_bs_ris: float,
                   rician_ris_ue: float) -> "SystemGeometry":
        """
        Same geometry with other Rician factors. Infinite factors switch
        to the LoS-only mode.
        """
        if math.isinf(rician_bs_ris) and math.isinf(rician_ris_ue):
            return replace(self, los_only=True)
        return replace(self, rician_bs_ris=rician_bs_ris,
                       rician_ris_ue=rician_ris_ue, los_only=False)

    def element_controlled(self) -> "SystemGeometry":
        """
        The EC-RIS counterpart: one block per element.
        """
        return self.with_blocks(self.n_ris_elements)


@dataclass(frozen=True)
class RisConfiguration:
    """
    Per-block rotation angles and common reflection phases, radians.
    """
    rotation_angles: Tuple[float, ...]
    reflection_phases: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "rotation_angles",
                           tuple(float(a) for a in self.rotation_angles))
        object.__setattr__(self, "reflection_phases",
                           tuple(float(p) for p in self.reflection_phases))
        if len(self.rotation_angles) != len(self.reflection_phases):
            raise RisError({"error_code": "invalid-argument",
                            "msg": "rotation_angles and reflection_phases " +
                                   "must have the same length."})
        for value in self.rotation_angles + self.reflection_phases:
            ensure_finite("RIS configuration entry", value)

    @classmethod
    def uniform(cls, theta: float, phases) -> "RisConfiguration":
        """
        All blocks rotated by the same angle ``theta``.
        """
        phases = tuple(phases)
        return cls(rotation_angles=(theta,) * len(phases),
                   reflection_phases=phases)

    @property
    def n_blocks(self) -> int:
        return len(self.reflection_phases)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """
    One sampled channel pair and the cascaded channel it produces for a
    given reflection vector.

    :param bs_ris_matrix: ``G``, shape (N_s, N_b).
    :param ris_ue_vector: ``g``, shape (N_s,).
    :param effective_channel: ``h`` with ``h^H = g^T diag(v) G``.
    """
    bs_ris_matrix: np.ndarray
    ris_ue_vector: np.ndarray
    effective_channel: np.ndarray

    def to_dict(self) -> dict:
        """
        JSON friendly form: every array as ``{"shape", "real", "imag"}``
        with nested lists.
        """
        def encode(array):
            array = np.asarray(array)
            return {"shape": list(array.shape), "real": array.real.tolist(),
                    "imag": array.imag.tolist()}

        return {"bs_ris_matrix": encode(self.bs_ris_matrix),
                "ris_ue_vector": encode(self.ris_ue_vector),
                "effective_channel": encode(self.effective_channel)}


@dataclass(frozen=True)
class LinkBudget:
    """
    Transmit power and noise power in watts.
    """
    transmit_power: float
    noise_power: float = 1.0
    snr_db: Optional[float] = None

    def __post_init__(self):
        _check_nonnegative("transmit_power", self.transmit_power)
        _check_nonnegative("noise_power", self.noise_power)
        if self.noise_power == 0:
            raise RisError({"error_code": "invalid-argument",
                            "msg": "noise_power must be > 0."})

    @classmethod
    def from_snr_db(cls, snr_db: float,
                    noise_power: float = 1.0) -> "LinkBudget":
        ensure_finite("snr_db", snr_db)
        return cls(transmit_power=10 ** (snr_db / 10) * noise_power,
                   noise_power=noise_power, snr_db=snr_db)

    @property
    def snr(self) -> float:
        return self.transmit_power / self.noise_power


@dataclass(frozen=True)
class SeBoundTerms:
    """
    Ingredients of the averaged-SE upper bound: the constants ``c1`` and
    ``c2``, the phase-determined angles ``r1`` (length K) and the
    rotation-determined angles ``r2`` (K rows of M entries).
    """
    c1: float
    c2: float
    r1: Tuple[float, ...]
    r2: Tuple[Tuple[float, ...], ...]

    def coherent_sum(self) -> complex:
        """
        The double sum sum_k e^{j r1_k} sum_i e^{-j r2_{k,i}}.
        """
        r1 = np.asarray(self.r1)
        r2 = np.asarray(self.r2)
        inner = np.exp(-1j * r2).sum(axis=1)
        return complex(np.sum(np.exp(1j * r1) * inner))


@dataclass(frozen=True)
class PowerParams:
    """
    Power coefficients of the system. Defaults are the static, phase
    circuit and amplifier values of the reference setup.

    :param static_power: P0, constant circuit power of BS, UE and RIS.
    :param phase_circuit_power: P1, one reflection phase control circuit.
    :param rotate_circuit_power: P2, one rotate control circuit.
    :param unit_rotation_power: P_unit, power for rotating one element one
        unit distance from the rotation center by one radian.
    :param amplifier_slope: xi, inverse power amplifier efficiency.
    """
    static_power: float = 12.0
    phase_circuit_power: float = 0.12
    rotate_circuit_power: float = 0.0
    unit_rotation_power: float = 0.0
    amplifier_slope: float = 1.2

    def __post_init__(self):
        _check_nonnegative("static_power", self.static_power)
        _check_nonnegative("phase_circuit_power", self.phase_circuit_power)
        _check_nonnegative("rotate_circuit_power", self.rotate_circuit_power)
        _check_nonnegative("unit_rotation_power", self.unit_rotation_power)
        ensure_finite("amplifier_slope", self.amplifier_slope)
        if self.amplifier_slope < 1:
            raise RisError({"error_code": "invalid-argument",
                            "msg": "amplifier_slope must be >= 1, got " +
                                   str(self.amplifier_slope) + "."})

    @property
    def p_ratio(self) -> float:
        """
        (P1 + P2) / P_unit; infinite when P_unit is zero.
        """
        circuits = self.phase_circuit_power + self.rotate_circuit_power
        if self.unit_rotation_power == 0:
            return math.inf
        return circuits / self.unit_rotation_power

    def without_rotation(self) -> "PowerParams":
        """
        Copy with no rotation mechanism (P2 = P_unit = 0), i.e. the
        coefficients of an element-controlled surface.
        """
        return replace(self, rotate_circuit_power=0.0,
                       unit_rotation_power=0.0)


class Branch(enum.Enum):
    FULL_SPLIT = "full-split"
    INTERIOR = "interior"
    SINGLE_BLOCK = "single-block"


@dataclass(frozen=True)
class SegmentationResult:
    """
    Outcome of the block-count optimization.

    :param continuous_k: Closed-form block count before rounding.
    :param chosen_k: Admissible block count (a divisor of N_s).
    :param chosen_m: Block size ``N_s / chosen_k``.
    :param power_at_chosen: RIS-dependent power at ``chosen_k`` plus the
        static and amplifier terms evaluated at zero transmit power.
    :param branch: Closed-form branch the rotation falls into.
    :param p_ratio: (P1 + P2) / P_unit.
    """
    continuous_k: float
    chosen_k: int
    chosen_m: int
    power_at_chosen: float
    branch: Branch
    p_ratio: float


class Regime(enum.Enum):
    """
    P_unit ranges of the EE feasibility rule. Each range corresponds to
    the segmentation branch that is optimal at the largest rotation.
    """
    FULL_SPLIT = "full-split"
    INTERIOR = "interior"
    SINGLE_BLOCK = "single-block"
    NONE = "none"


@dataclass(frozen=True)
class FeasibilityVerdict:
    """
    :param regime: P_unit range the parameters fall into.
    :param feasible: Brute-force verdict, ``margin > 0``.
    :param margin: P_EC minus the largest P_BC over the rotation grid.
    :param inequality_holds: Verdict of the closed-form P2 inequality of
        the regime (False for ``Regime.NONE``).
    :param near_boundary: P_unit lies on a regime boundary (relative
        tolerance 1e-9); the lower P_unit range is reported.
    """
    regime: Regime
    feasible: bool
    margin: float
    inequality_holds: bool
    near_boundary: bool = False

    @property
    def discrepancy(self) -> bool:
        return self.inequality_holds != self.feasible


SWEEP_CSV_COLUMNS = ["axis", "mean_se_bc", "se_stderr", "bound_bc",
                     "bound_ec", "p_ec_watts", "p_bc_watts", "k_star",
                     "ee_bc", "ee_ec"]


@dataclass(frozen=True)
class SweepResult:
    """
    Averaged SE/EE along one axis (SNR in dB, kappa or N_s). The first
    block of fields is the CSV payload; the remaining ones are carried into
    run archives.
    """
    axis_name: str
    axis_values: Tuple[float, ...]
    mean_se: Tuple[float, ...]
    se_std_error: Tuple[float, ...]
    bound_se: Tuple[float, ...]
    mean_ee_bc: Tuple[float, ...]
    mean_ee_ec: Tuple[float, ...]
    n_trials: int
    seed: int
    bound_ec: Tuple[float, ...] = ()
    bound_conventional: Tuple[float, ...] = ()
    mean_se_ec: Tuple[float, ...] = ()
    se_std_error_ec: Tuple[float, ...] = ()
    power_ec: Tuple[float, ...] = ()
    power_bc: Tuple[float, ...] = ()
    k_star: Tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.axis_values)
        for name in ("mean_se", "se_std_error", "bound_se", "mean_ee_bc",
                     "mean_ee_ec", "bound_ec", "bound_conventional",
                     "mean_se_ec", "se_std_error_ec", "power_ec", "power_bc",
                     "k_star"):
            values = getattr(self, name)
            if values and len(values) != n:
                raise RisError({"error_code": "invalid-argument",
                                "msg": "SweepResult." + name + " has " +
                                       str(len(values)) + " entries, axis " +
                                       "has " + str(n) + "."})

    def to_frame(self) -> pd.DataFrame:
        """
        The CSV table, one row per axis point, in the fixed column order.
        """
        return pd.DataFrame({
            "axis": list(self.axis_values),
            "mean_se_bc": list(self.mean_se),
            "se_stderr": list(self.se_std_error),
            "bound_bc": list(self.bound_se),
            "bound_ec": list(self.bound_ec),
            "p_ec_watts": list(self.power_ec),
            "p_bc_watts": list(self.power_bc),
            "k_star": [int(k) for k in self.k_star],
            "ee_bc": list(self.mean_ee_bc),
            "ee_ec": list(self.mean_ee_ec),
        }, columns=SWEEP_CSV_COLUMNS)

    def to_dict(self) -> dict:
        d = {"axis_name": self.axis_name, "n_trials": self.n_trials,
             "seed": self.seed}
        for name in ("axis_values", "mean_se", "se_std_error", "bound_se",
                     "mean_ee_bc", "mean_ee_ec", "bound_ec",
                     "bound_conventional", "mean_se_ec", "se_std_error_ec",
                     "power_ec", "power_bc", "k_star"):
            d[name] = list(getattr(self, name))
        return d


AXES = ("snr", "kappa", "n_elements")
SEGMENTATIONS = ("optimal", "fixed")


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    grid: Tuple[float, ...]
    n_trials: int
    seed: int
    snr_db: float = 10.0
    noise_power: float = 1.0
    segmentation: str = "optimal"


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Fully resolved experiment document.
    """
    geometry: SystemGeometry
    power: PowerParams
    sweep: SweepSpec
    output_path: Optional[str] = None
    archive_path: Optional[str] = None
    config_version: str = "1.0.0"


@dataclass(frozen=True)
class FeasibilityMapConfig:
    """
    Grid over (P2, P_unit) for the EE feasibility map. ``power`` supplies
    P1 (and the static terms, which cancel in the margin).
    """
    power: PowerParams
    n_elements: int
    p2_grid: Tuple[float, ...]
    p_unit_grid: Tuple[float, ...]
    output_path: Optional[str] = None
    config_version: str = "1.0.0"
