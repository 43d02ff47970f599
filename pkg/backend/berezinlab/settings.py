"""
Django settings for the berezinlab project.

The project has no web surface: Django provides the management commands
(`certify`, `tighten`), the configuration layer and the test runner.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""

import os
from dotenv import load_dotenv
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Load .env for local runs
env_path = BASE_DIR.parent / '.env'
if env_path.exists():
    load_dotenv(dotenv_path=env_path)


# Only used by Django internals (signing); nothing here is served.
SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'berezinlab-local-only')

DEBUG = os.environ.get('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = []

# Application definition

INSTALLED_APPS = [
    "certification.apps.CertificationConfig",
]

# Nothing is persisted; an in-memory database keeps the test runner happy.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': ':memory:',
    }
}

# Internationalization
# https://docs.djangoproject.com/en/4.2/topics/i18n/

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Certification defaults (overridable per run config / CLI flag)
BEREZIN_TOL_REL = float(os.environ.get('BEREZIN_TOL_REL', '1e-9'))
BEREZIN_TOL_ABS = float(os.environ.get('BEREZIN_TOL_ABS', '1e-12'))
BEREZIN_TRIALS = int(os.environ.get('BEREZIN_TRIALS', '500'))
BEREZIN_MASTER_SEED = int(os.environ.get('BEREZIN_MASTER_SEED', '42'))
BEREZIN_OUTPUT_DIR = os.environ.get('BEREZIN_OUTPUT_DIR', 'reports')
BEREZIN_REPORT_FORMAT = os.environ.get('BEREZIN_REPORT_FORMAT', 'json')
# Worker processes for trial evaluation; 1 evaluates in-process
BEREZIN_WORKERS = int(os.environ.get('BEREZIN_WORKERS', str(os.cpu_count() or 1)))
BEREZIN_CONDITION_CAP = float(os.environ.get('BEREZIN_CONDITION_CAP', '1e3'))
BEREZIN_ANGLE_COUNT = int(os.environ.get('BEREZIN_ANGLE_COUNT', '720'))
# Product grids of block suites larger than this are stride-subsampled
BEREZIN_BLOCK_GRID_LIMIT = int(os.environ.get('BEREZIN_BLOCK_GRID_LIMIT', '4096'))


# Logging (INFO for suite progress, WARNING elsewhere)
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(asctime)s %(levelname)s %(name)s [%(suite)s]: %(message)s'
        },
    },
    'filters': {
        'suite_context': {
            '()': 'berezinlab.logging_filters.SuiteContextFilter',
        },
        'suite_context_quiet': {
            '()': 'berezinlab.logging_filters.SuiteContextFilter',
            'drop_trial_debug': True,
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
            'filters': ['suite_context'],
        },
        'console_quiet': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
            'filters': ['suite_context_quiet'],
        },
    },
    'loggers': {
        'certification.runner': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
        'certification.generators': {
            'handlers': ['console_quiet'],
            'level': 'INFO',
            'propagate': False,
        },
        'certification.suites': {
            'handlers': ['console_quiet'],
            'level': 'INFO',
            'propagate': False,
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.environ.get('DJANGO_LOG_LEVEL', 'WARNING'),
    },
}
