"""
Settings for running the commands and the tests without a host project.
Projects embedding the app set the ``RIS_*`` values in their own settings.
"""
import os

SECRET_KEY = os.environ.get("RIS_SECRET_KEY", "rotatable-ris-standalone")

DEBUG = False

INSTALLED_APPS = [
    "rest_framework",
    "rotatable_ris",
]

DATABASES = {}

USE_TZ = True

RIS_LOG_LEVEL = os.environ.get("RIS_LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "rotatable_ris": {
            "handlers": ["console"],
            "level": RIS_LOG_LEVEL,
        },
    },
}

RIS_DEFAULT_TRIALS = 10000
RIS_DEFAULT_SEED = 0
RIS_N_JOBS = 1
RIS_CHUNK_SIZE = 1024
RIS_FEASIBILITY_GRID_POINTS = 1000
RIS_ARCHIVE_AUTHOR = os.environ.get("RIS_ARCHIVE_AUTHOR", "rotatable-ris")
RIS_ARCHIVE_EMAIL = os.environ.get("RIS_ARCHIVE_EMAIL",
                                   "rotatable-ris@localhost")
