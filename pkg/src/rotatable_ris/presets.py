"""
Bundled experiment documents. Angles put the UE at pi/3 from the RIS with
the BS broadside, so the specular rotation is -pi/12, inside the sector.
"""
import math
from typing import Tuple

from .parsers import Config, DocumentConfigParser
from .utils import RisError

_geometry = {
    "n_bs_antennas": 32,
    "n_ris_elements": 64,
    "n_blocks": 8,
    "aoa_ris": math.pi / 2,
    "aod_ris": math.pi / 3,
    "aod_bs": math.pi / 3,
    "rician_bs_ris": 10.0,
    "rician_ris_ue": 10.0,
}

_snr_sweep = {"axis": "snr", "grid": {"start": -10.0, "stop": 40.0,
                                      "num": 11}}

# (P2, P_unit) of the three rotate control circuit designs
_cases = {
    "fig3-ee-case1": (0.108, 0.821),
    "fig3-ee-case2": (0.215, 0.548),
    "fig3-ee-case3": (0.430, 0.003),
}


def _ee_case(p2: float, p_unit: float) -> dict:
    return {"geometry": dict(_geometry),
            "power": {"rotate_circuit_power": p2,
                      "unit_rotation_power": p_unit},
            "sweep": dict(_snr_sweep)}


PRESETS = {
    "fig2-tightness": ("experiment", {
        "geometry": dict(_geometry),
        "sweep": {"axis": "kappa", "grid": [0.0, 1.0, 2.0, 5.0, 10.0, 20.0,
                                            50.0, 100.0],
                  "segmentation": "fixed", "snr_db": 10.0},
    }),
    "fig3-se": ("experiment", _ee_case(*_cases["fig3-ee-case3"])),
    "prop3-feasibility": ("feasibility", {
        "n_elements": 32,
        "p2_grid": {"start": 0.0, "stop": 1.0, "num": 50},
        "p_unit_grid": {"start": 0.0, "stop": 1.0, "num": 50},
    }),
}
PRESETS.update({name: ("experiment", _ee_case(*case))
                for name, case in _cases.items()})


def get_preset(name: str) -> Tuple[str, Config]:
    """
    Resolve a preset.

    :raises rotatable_ris.utils.RisError: ``parse-error`` for unknown names.

    :return: The document kind (``experiment`` or ``feasibility``) and the
        parsed config.
    """
    if name not in PRESETS:
        raise RisError({"error_code": "parse-error",
                        "msg": "Unknown preset '" + str(name) + "'. " +
                               "Choose from " + ", ".join(sorted(PRESETS)) +
                               "."})
    kind, document = PRESETS[name]
    return kind, DocumentConfigParser(document).parse(kind)
