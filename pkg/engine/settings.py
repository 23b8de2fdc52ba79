import os
from pathlib import Path

from dotenv import load_dotenv

# BASE DIRECTORY
BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env
load_dotenv(dotenv_path=BASE_DIR / ".env", override=True)

# SECRET KEY
# Nothing is signed: the engine has no web surface, so a development key is fine.
SECRET_KEY = os.getenv("SECRET_KEY", "invariants-engine-local-key")

# DEBUG MODE
DEBUG = os.getenv("DEBUG", "False") == "True"

ALLOWED_HOSTS = []

# INSTALLED APPS
INSTALLED_APPS = [
    # Third-party
    "rest_framework",

    # Local apps
    "apps.core",
    "apps.series",
    "apps.surfaces",
    "apps.seiberg_witten",
    "apps.donaldson",
    "apps.analysis",
    "apps.jobs",
]

# No persistence: every job is a pure computation.
DATABASES = {}

# REST FRAMEWORK
# Only serializers and the JSON renderer are used.
REST_FRAMEWORK = {
    "UNAUTHENTICATED_USER": None,
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
    ],
}

# ENGINE
INVARIANTS_LOG_LEVEL = os.getenv("INVARIANTS_LOG_LEVEL", "WARNING").upper()
INVARIANTS_DEFAULT_TRUNCATION = int(os.getenv("INVARIANTS_DEFAULT_TRUNCATION", 8))
INVARIANTS_MAX_TRUNCATION = int(os.getenv("INVARIANTS_MAX_TRUNCATION", 24))
INVARIANTS_DEFAULT_FORMAT = os.getenv("INVARIANTS_DEFAULT_FORMAT", "table")

# LOGGING
# Everything goes to stderr; stdout carries command output only.
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "{levelname} {asctime} {name} {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "stream": "ext://sys.stderr",
            "formatter": "verbose",
        },
    },
    "loggers": {
        "apps": {
            "handlers": ["console"],
            "level": INVARIANTS_LOG_LEVEL,
            "propagate": False,
        },
    },
}
