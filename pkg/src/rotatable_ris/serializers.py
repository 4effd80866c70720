import math

import numpy as np
from rest_framework import serializers

from .models import AXES, SEGMENTATIONS, ExperimentConfig,\
                    FeasibilityMapConfig, PowerParams, SweepSpec,\
                    SystemGeometry
from .utils import get_setting


class StrictSerializer(serializers.Serializer):
    """
    Serializer rejecting keys it does not declare.
    """
    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {key: ["Unknown key."] for key in unknown})
        return super().to_internal_value(data)


class GridField(serializers.Field):
    """
    A nonempty list of numbers or a ``{"start", "stop", "num"}`` object
    expanded like ``numpy.linspace``. Always represented as a list.
    """
    default_error_messages = {
        "invalid": "Expected a nonempty list of numbers or an object with "
                   "the keys start, stop and num.",
        "negative": "Grid values must be >= 0.",
    }

    def __init__(self, nonnegative=False, **kwargs):
        self.nonnegative = nonnegative
        super().__init__(**kwargs)

    @staticmethod
    def _is_number(value):
        return isinstance(value, (int, float)) and\
            not isinstance(value, bool) and math.isfinite(value)

    def to_internal_value(self, data):
        if isinstance(data, dict):
            if set(data) != {"start", "stop", "num"} or\
                    not self._is_number(data["start"]) or\
                    not self._is_number(data["stop"]) or\
                    not isinstance(data["num"], int) or data["num"] < 1:
                self.fail("invalid")
            grid = np.linspace(data["start"], data["stop"], data["num"])
            values = tuple(float(v) for v in grid)
        elif isinstance(data, list) and data and\
                all(self._is_number(v) for v in data):
            values = tuple(float(v) for v in data)
        else:
            self.fail("invalid")
        if self.nonnegative and min(values) < 0:
            self.fail("negative")
        return values

    def to_representation(self, value):
        return [float(v) for v in value]


def _angle(default):
    return serializers.FloatField(min_value=0.0, max_value=math.pi,
                                  default=default)


class GeometrySerializer(StrictSerializer):
    n_bs_antennas = serializers.IntegerField(min_value=1, default=32)
    n_ris_elements = serializers.IntegerField(min_value=1, default=64)
    n_blocks = serializers.IntegerField(min_value=1, default=1)
    block_size = serializers.IntegerField(min_value=1, required=False)
    aoa_ris = _angle(math.pi / 2)
    aod_ris = _angle(math.pi / 3)
    aod_bs = _angle(math.pi / 3)
    rician_bs_ris = serializers.FloatField(min_value=0.0, default=10.0)
    rician_ris_ue = serializers.FloatField(min_value=0.0, default=10.0)
    los_only = serializers.BooleanField(default=False)

    def validate(self, data):
        n_s = data["n_ris_elements"]
        k = data["n_blocks"]
        if n_s % k:
            raise serializers.ValidationError(
                {"n_blocks": "K must divide N_s (K=" + str(k) + ", N_s=" +
                             str(n_s) + ")."})
        if data.setdefault("block_size", n_s // k) != n_s // k:
            raise serializers.ValidationError(
                {"block_size": "block_size must equal N_s / K."})
        return data


class PowerSerializer(StrictSerializer):
    static_power = serializers.FloatField(min_value=0.0, default=12.0)
    phase_circuit_power = serializers.FloatField(min_value=0.0, default=0.12)
    rotate_circuit_power = serializers.FloatField(min_value=0.0, default=0.0)
    unit_rotation_power = serializers.FloatField(min_value=0.0, default=0.0)
    amplifier_slope = serializers.FloatField(min_value=1.0, default=1.2)


class SweepSerializer(StrictSerializer):
    axis = serializers.ChoiceField(choices=AXES)
    grid = GridField()
    n_trials = serializers.IntegerField(
        min_value=2, default=lambda: get_setting("RIS_DEFAULT_TRIALS"))
    seed = serializers.IntegerField(
        min_value=0, max_value=2 ** 64 - 1,
        default=lambda: get_setting("RIS_DEFAULT_SEED"))
    snr_db = serializers.FloatField(default=10.0)
    noise_power = serializers.FloatField(min_value=0.0, default=1.0)
    segmentation = serializers.ChoiceField(choices=SEGMENTATIONS,
                                           default="optimal")

    def validate_noise_power(self, value):
        if value <= 0:
            raise serializers.ValidationError("noise_power must be > 0.")
        return value

    def validate(self, data):
        if data["axis"] == "n_elements" and\
                any(v != int(v) or v < 1 for v in data["grid"]):
            raise serializers.ValidationError(
                {"grid": "N_s values must be positive integers."})
        if data["axis"] == "kappa" and min(data["grid"]) < 0:
            raise serializers.ValidationError(
                {"grid": "Rician factors must be >= 0."})
        return data


class OutputSerializer(StrictSerializer):
    path = serializers.CharField(source="output_path", required=False,
                                 allow_null=True, default=None)


class ExperimentOutputSerializer(OutputSerializer):
    archive = serializers.CharField(source="archive_path", required=False,
                                    allow_null=True, default=None)


class _DocumentSerializer(StrictSerializer):
    """
    Top level of a config document. Missing optional sections are
    validated as empty objects so their defaults apply.
    """
    optional_sections = ("power", "output")

    config_version = serializers.CharField(default="1.0.0")

    def to_internal_value(self, data):
        if isinstance(data, dict):
            data = dict(data)
            for name in self.optional_sections:
                data.setdefault(name, {})
        return super().to_internal_value(data)


class ExperimentConfigSerializer(_DocumentSerializer):
    optional_sections = ("geometry", "power", "output")

    geometry = GeometrySerializer()
    power = PowerSerializer()
    sweep = SweepSerializer()
    output = ExperimentOutputSerializer(source="*")

    def create(self, validated_data):
        return ExperimentConfig(
            geometry=SystemGeometry(**validated_data["geometry"]),
            power=PowerParams(**validated_data["power"]),
            sweep=SweepSpec(**validated_data["sweep"]),
            output_path=validated_data.get("output_path"),
            archive_path=validated_data.get("archive_path"),
            config_version=validated_data["config_version"])


class FeasibilityMapSerializer(_DocumentSerializer):
    power = PowerSerializer()
    n_elements = serializers.IntegerField(min_value=1, default=32)
    p2_grid = GridField(nonnegative=True)
    p_unit_grid = GridField(nonnegative=True)
    output = OutputSerializer(source="*")

    def create(self, validated_data):
        return FeasibilityMapConfig(
            power=PowerParams(**validated_data["power"]),
            n_elements=validated_data["n_elements"],
            p2_grid=validated_data["p2_grid"],
            p_unit_grid=validated_data["p_unit_grid"],
            output_path=validated_data.get("output_path"),
            config_version=validated_data["config_version"])
