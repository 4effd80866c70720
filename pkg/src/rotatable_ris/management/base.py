import argparse
import logging

from django.core.management.base import BaseCommand, CommandError

from ..parsers import parse_config_file, serialize_config
from ..presets import PRESETS, get_preset
from ..utils import RisError

logger = logging.getLogger(__name__)

# error kinds reported with exit status 2, everything else exits with 1
USAGE_ERRORS = ("parse-error", "validation-error", "invalid-argument",
                "out-of-sector")


def int_at_least(minimum):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError("'" + text + "' is not an "
                                             "integer")
        if value < minimum:
            raise argparse.ArgumentTypeError("must be >= " + str(minimum))
        return value
    return parse


def seed(text):
    value = int_at_least(0)(text)
    if value > 2 ** 64 - 1:
        raise argparse.ArgumentTypeError("must fit into 64 bits")
    return value


class RisCommand(BaseCommand):
    """
    Base class of the commands taking a config document either from a file
    or from a preset.
    """
    kind = "experiment"

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--config", help="JSON config file or .zdc run "
                                             "archive.")
        source.add_argument("--preset", choices=sorted(PRESETS),
                            help="Bundled config.")
        parser.add_argument("--output", help="CSV destination, stdout if "
                                             "omitted.")

    def load_config(self, options):
        if options["preset"]:
            kind, config = get_preset(options["preset"])
            if kind != self.kind:
                raise RisError({"error_code": "parse-error",
                                "msg": "Preset '" + options["preset"] +
                                       "' is of kind " + kind + ", expected " +
                                       self.kind + "."})
            return config
        return parse_config_file(options["config"], self.kind)

    def log_config(self, config):
        logger.info("Resolved config:\n%s", serialize_config(config))

    def emit(self, text, path):
        from ..experiments import write_text

        if path:
            write_text(text, path)
            logger.info("Wrote %s", path)
        else:
            self.stdout.write(text, ending="")

    def run(self, **options):  # pragma: no cover
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            self.run(**options)
        except RisError as e:
            returncode = 2 if e.error_code in USAGE_ERRORS else 1
            raise CommandError(e.error_code + ": " + e.msg,
                               returncode=returncode)
