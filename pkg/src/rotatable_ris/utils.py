import math
from typing import Any, Sequence


_defaults = {
    "RIS_DEFAULT_TRIALS": 10000,
    "RIS_DEFAULT_SEED": 0,
    "RIS_N_JOBS": 1,
    "RIS_CHUNK_SIZE": 1024,
    "RIS_FEASIBILITY_GRID_POINTS": 1000,
    "RIS_ARCHIVE_AUTHOR": "rotatable-ris",
    "RIS_ARCHIVE_EMAIL": "rotatable-ris@localhost",
}


class RisError(Exception):
    """
    Exception raised by the numerical modules and the config layer. The
    single argument is a dictionary with the keys ``error_code`` (one of
    ``invalid-argument``, ``degenerate-channel``, ``out-of-sector``,
    ``parse-error``, ``io-error``, ``validation-error``) and ``msg``.
    """
    @property
    def error_code(self) -> str:
        return self.args[0]["error_code"]

    @property
    def msg(self) -> str:
        return self.args[0]["msg"]


def get_setting(name: str) -> Any:
    """
    Return a ``RIS_*`` value from the Django settings, falling back to the
    package default when Django is not configured or the value is unset.

    :param name: Name of the setting, e.g. ``RIS_N_JOBS``.

    :return: The configured or default value.
    """
    from django.conf import settings
    from django.core.exceptions import ImproperlyConfigured

    try:
        return getattr(settings, name, _defaults[name])
    except ImproperlyConfigured:
        return _defaults[name]


def ensure_length(name: str, values: Sequence, expected: int):
    """
    Checks that a vector argument has the expected length. Raises a
    RisError otherwise.

    :param name: Argument name used in the message.
    :param values: Vector to check.
    :param expected: Required length.

    :raises rotatable_ris.utils.RisError: On length mismatch.
    """
    if len(values) != expected:
        raise RisError({"error_code": "invalid-argument",
                        "msg": name + " has length " + str(len(values)) +
                               " but " + str(expected) + " is required."})


def ensure_finite(name: str, value: float):
    """
    Checks that a scalar argument is a finite number. Raises a RisError
    otherwise.

    :param name: Argument name used in the message.
    :param value: Value to check.

    :raises rotatable_ris.utils.RisError: If the value is NaN or infinite.
    """
    if not math.isfinite(value):
        raise RisError({"error_code": "invalid-argument",
                        "msg": name + " must be finite, got " + str(value) +
                               "."})
