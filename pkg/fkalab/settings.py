"""
Django settings for the fkalab project.

Numerical defaults (quadrature, tolerances, worker cap) live here next to
the usual Django settings and are read from the environment with decouple.
"""

import math
import os
from pathlib import Path

import dj_database_url
from decouple import config, Csv

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-change-me-in-production')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=Csv())


# Application definition

INSTALLED_APPS = [
    'django.contrib.admin',
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'django.contrib.sessions',
    'django.contrib.messages',
    'django.contrib.staticfiles',
    # Local apps
    'core',
    'transform',
    'spectral',
    'rearrange',
    'harness',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.contrib.sessions.middleware.SessionMiddleware',
    'django.middleware.common.CommonMiddleware',
    'django.middleware.csrf.CsrfViewMiddleware',
    'django.contrib.auth.middleware.AuthenticationMiddleware',
    'django.contrib.messages.middleware.MessageMiddleware',
    'django.middleware.clickjacking.XFrameOptionsMiddleware',
]

ROOT_URLCONF = 'fkalab.urls'

TEMPLATES = [
    {
        'BACKEND': 'django.template.backends.django.DjangoTemplates',
        'DIRS': [],
        'APP_DIRS': True,
        'OPTIONS': {
            'context_processors': [
                'django.template.context_processors.debug',
                'django.template.context_processors.request',
                'django.contrib.auth.context_processors.auth',
                'django.contrib.messages.context_processors.messages',
            ],
        },
    },
]

WSGI_APPLICATION = 'fkalab.wsgi.application'


# Database: SQLite unless DATABASE_URL says otherwise (suite-run archive only)

DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
        conn_max_age=600,
    ),
}


# Internationalisation

LANGUAGE_CODE = 'en-nz'
TIME_ZONE = 'Pacific/Auckland'
USE_I18N = True
USE_TZ = True


# Static files (admin only)

STATIC_URL = '/static/'
STATIC_ROOT = BASE_DIR / 'staticfiles'


# Default primary key

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Numerics
#
# FKA_THREADS caps the worker pool used for transform rows and suite entries.
# Results never depend on it: rows are chunked at a fixed size and reports are
# aggregated in catalog order.

FKA_THREADS = config('FKA_THREADS', default=min(os.cpu_count() or 1, 8), cast=int)

FKA_TAIL_TOL          = config('FKA_TAIL_TOL',          default=1e-12, cast=float)
FKA_NODES_PER_PANEL   = config('FKA_NODES_PER_PANEL',   default=12, cast=int)
FKA_OSCILLATION_GUARD = config('FKA_OSCILLATION_GUARD', default=math.pi / 2, cast=float)
FKA_MAX_NODES         = config('FKA_MAX_NODES',         default=6000, cast=int)
FKA_LMAX              = config('FKA_LMAX',              default=32, cast=int)
FKA_CHECK_TOLERANCE   = config('FKA_CHECK_TOLERANCE',   default=1e-5, cast=float)
FKA_SUPPORT_THRESHOLD = config('FKA_SUPPORT_THRESHOLD', default=1e-10, cast=float)


# Logging

FKA_LOG_LEVEL = config('FKA_LOG_LEVEL', default='WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {'format': '%(levelname)s %(name)s: %(message)s'},
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        app: {'handlers': ['console'], 'level': FKA_LOG_LEVEL, 'propagate': False}
        for app in ('core', 'transform', 'spectral', 'rearrange', 'harness')
    },
}
