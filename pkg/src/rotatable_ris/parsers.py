from abc import ABC, abstractmethod
import copy
import json
import math
import zipfile
from typing import Union

from packaging import version

from .models import ExperimentConfig, FeasibilityMapConfig
from .serializers import ExperimentConfigSerializer, FeasibilityMapSerializer
from .utils import RisError

Config = Union[ExperimentConfig, FeasibilityMapConfig]

_schemas_1_0_0 = {
                  "experiment": ExperimentConfigSerializer,
                  "feasibility": FeasibilityMapSerializer,
                  }

_schemas = {
            "1.0.0": _schemas_1_0_0,
            }

MIN_SUPPORTED_VERSION = min([version.parse(k) for k in _schemas.keys()])

ARCHIVE_CONFIG_NAME = "data/config.json"


def _flatten_errors(detail, prefix: str = ""):
    """
    Yield ``"dotted.path: message"`` strings for a DRF error structure.
    """
    if isinstance(detail, dict):
        for key, value in detail.items():
            name = key if key != "non_field_errors" else ""
            path = ".".join(p for p in (prefix, name) if p)
            yield from _flatten_errors(value, path)
    elif isinstance(detail, list):
        for item in detail:
            yield from _flatten_errors(item, prefix)
    else:
        yield (prefix or "config") + ": " + str(detail)


def _reject_constant(name: str):
    raise RisError({"error_code": "parse-error",
                    "msg": "Invalid JSON value " + name + ": numbers must " +
                           "be finite."})


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise RisError({"error_code": "parse-error",
                        "msg": "Invalid JSON value " + text + ": numbers " +
                               "must be finite."})
    return value


class BaseConfigParser(ABC):
    """
    Base class for config source specific parsers. Parsers should inherit
    from this class because it takes care of the schema selection and the
    validation.
    """
    def __init__(self):
        self.document = None

    @abstractmethod
    def _read_document(self):  # pragma: no cover
        """
        Read the JSON document and store it to self.document.

        This method is source specific and needs to be overwritten by every
        inheriting class.
        """
        pass

    def _schema(self, kind: str):
        """
        Return the serializer class of ``kind`` for the config version of
        the document.

        :raises rotatable_ris.utils.RisError: If the version is malformed or
            older than the oldest supported one.
        """
        config_version = self.document.get("config_version", "1.0.0")
        try:
            v = version.parse(str(config_version))
        except version.InvalidVersion:
            raise RisError({"error_code": "parse-error",
                            "msg": "config_version: '" + str(config_version) +
                                   "' is not a valid version."})
        if v < MIN_SUPPORTED_VERSION:
            raise RisError({"error_code": "parse-error",
                            "msg": "config_version: documents of version " +
                                   str(config_version) + " are not " +
                                   "supported, the minimum is " +
                                   str(MIN_SUPPORTED_VERSION) + "."})
        key = max([k for k in _schemas.keys() if version.parse(k) <= v],
                  key=version.parse)
        return _schemas[key][kind]

    def parse(self, kind: str = "experiment") -> Config:
        """
        Read, validate and convert the document.

        :param kind: ``experiment`` or ``feasibility``.

        :raises rotatable_ris.utils.RisError: ``parse-error`` naming every
            offending field.

        :return: The resolved config with all defaults applied.
        """
        self._read_document()
        if not isinstance(self.document, dict):
            raise RisError({"error_code": "parse-error",
                            "msg": "The config must be a JSON object."})
        serializer = self._schema(kind)(data=self.document)
        if not serializer.is_valid():
            messages = sorted(_flatten_errors(serializer.errors))
            raise RisError({"error_code": "parse-error",
                            "msg": "; ".join(messages)})
        return serializer.save()


class JsonConfigParser(BaseConfigParser):
    """
    Parser for config documents given as JSON text.
    """
    def __init__(self, text: Union[str, bytes]):
        super().__init__()
        self.text = text

    def _read_document(self):
        try:
            self.document = json.loads(self.text,
                                       parse_constant=_reject_constant,
                                       parse_float=_finite_float)
        except json.JSONDecodeError as e:
            raise RisError({"error_code": "parse-error",
                            "msg": "Invalid JSON at line " + str(e.lineno) +
                                   " column " + str(e.colno) + ": " + e.msg})
        except UnicodeDecodeError:
            raise RisError({"error_code": "parse-error",
                            "msg": "The config is not valid UTF-8."})


class ContainerConfigParser(JsonConfigParser):
    """
    Parser reading the config stored in a .zdc run archive, so archived
    runs can be replayed.
    """
    def __init__(self, filename: str):
        super().__init__(None)
        self.filename = filename

    def _read_document(self):
        with zipfile.ZipFile(self.filename, 'r') as zfile:
            if ARCHIVE_CONFIG_NAME not in zfile.namelist():
                raise RisError({"error_code": "parse-error",
                                "msg": "The archive has no " +
                                       ARCHIVE_CONFIG_NAME + "."})
            with zfile.open(ARCHIVE_CONFIG_NAME) as config_json:
                self.text = config_json.read()
        super()._read_document()


def parse_config(text: Union[str, bytes]) -> ExperimentConfig:
    """
    Parse an experiment document.

    :param text: UTF-8 JSON text.

    :raises rotatable_ris.utils.RisError: ``parse-error`` on malformed JSON,
        missing or unknown keys and invalid values.
    """
    return JsonConfigParser(text).parse("experiment")


def parse_feasibility_config(text: Union[str, bytes]) -> FeasibilityMapConfig:
    """
    Parse a feasibility map document.
    """
    return JsonConfigParser(text).parse("feasibility")


def parse_config_file(filename: str, kind: str = "experiment") -> Config:
    """
    Find the source type of a config file and parse it. JSON files are
    parsed directly, zip based run archives through their stored config.

    :param filename: Path of the config file.
    :param kind: ``experiment`` or ``feasibility``.

    :raises rotatable_ris.utils.RisError: ``io-error`` if the file cannot be
        read, ``parse-error`` for unsupported formats and invalid documents.
    """
    import magic

    try:
        with open(filename, "rb") as f:
            head = f.read(2048)
        filetype = magic.from_buffer(head, mime=True)
        if filetype == "application/zip" or zipfile.is_zipfile(filename):
            parser = ContainerConfigParser(filename)
        elif filetype in ("application/json", "text/plain") or\
                head.lstrip().startswith((b"{", b"[")):
            with open(filename, "rb") as f:
                parser = JsonConfigParser(f.read())
        else:
            raise RisError({"error_code": "parse-error",
                            "msg": "Config file format has to be JSON or " +
                                   "a .zdc archive, got " + filetype + "."})
        return parser.parse(kind)
    except OSError as e:
        raise RisError({"error_code": "io-error",
                        "msg": "Cannot read " + str(filename) + ": " +
                               str(e)})
    except zipfile.BadZipFile as e:
        raise RisError({"error_code": "parse-error",
                        "msg": "Broken archive " + str(filename) + ": " +
                               str(e)})


def serialize_config(config: Config) -> str:
    """
    Canonical JSON of a resolved config: sorted keys, two space indent,
    LF line endings. Parsing the result gives back an equal config.
    """
    if isinstance(config, ExperimentConfig):
        serializer = ExperimentConfigSerializer(config)
    else:
        serializer = FeasibilityMapSerializer(config)
    return json.dumps(serializer.data, sort_keys=True, indent=2) + "\n"


class DocumentConfigParser(BaseConfigParser):
    """
    Parser for documents that are already Python objects, e.g. presets.
    """
    def __init__(self, document: dict):
        super().__init__()
        self.source = document

    def _read_document(self):
        self.document = copy.deepcopy(self.source)
