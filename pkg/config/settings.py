"""
Django settings for the equilibrium lattice project.
"""
import os
from pathlib import Path

from dotenv import load_dotenv

# Build paths
BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(BASE_DIR / '.env')


def env_flag(name: str, default: bool) -> bool:
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


SECRET_KEY = os.environ.get('DJANGO_SECRET_KEY', 'django-insecure-dev-key-change-in-production')
DEBUG = env_flag('DJANGO_DEBUG', True)
ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'games',
]

# Database - SQLite
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': os.environ.get('EQLATTICE_DB_PATH', str(BASE_DIR / 'db.sqlite3')),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Analysis knobs passed to the computation package by the service layer
EQLATTICE = {
    'MAX_WORKERS': int(os.environ.get('EQLATTICE_MAX_WORKERS', 4)),
    'MAX_SWEEPS': int(os.environ.get('EQLATTICE_MAX_SWEEPS', 10000)),
    'RECORD_RUNS': env_flag('EQLATTICE_RECORD_RUNS', True),
}

LOG_LEVEL = os.environ.get('EQLATTICE_LOG_LEVEL', 'INFO').upper()

# Create logs directory if it doesn't exist
LOGS_DIR = BASE_DIR / 'logs'
LOGS_DIR.mkdir(exist_ok=True)

# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'standard': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'standard',
            'level': 'WARNING',
        },
        'file': {
            'class': 'logging.FileHandler',
            'filename': LOGS_DIR / 'eqlattice.log',
            'formatter': 'standard',
        },
    },
    'loggers': {
        'eqlattice': {
            'handlers': ['console', 'file'],
            'level': LOG_LEVEL,
        },
        'games': {
            'handlers': ['console', 'file'],
            'level': LOG_LEVEL,
        },
    },
}
