import os
import sys


def main():
    """
    Console entry point: Django's command line with the bundled settings
    unless ``DJANGO_SETTINGS_MODULE`` points elsewhere.
    """
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "rotatable_ris.settings")
    from django.core.management import execute_from_command_line

    execute_from_command_line(sys.argv)
