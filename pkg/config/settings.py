"""
Django settings for the diagram rewriting toolkit.

The toolkit has no web surface; Django provides configuration, logging,
management commands and the test runner.
"""
from pathlib import Path
import os
import dj_database_url
from dotenv import load_dotenv

load_dotenv()


# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-string-diagram-rewriting-toolkit')

DEBUG = os.getenv('DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = os.getenv('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    #####apps####
    'diagrams',
    'rewriting',
    'termination',
    'peaks',
    'coherence',
]

MIDDLEWARE = []

ROOT_URLCONF = 'config.urls'


# ----------------------
# Database (unused by the toolkit, required by the test runner)
# ----------------------

DATABASES = {
    'default': dj_database_url.config(
        default=f"sqlite:///{BASE_DIR / 'db.sqlite3'}",
    )
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# ----------------------
# Rewriting toolkit
# ----------------------

# maximum number of rewrite steps (or explored diagrams) before BudgetExhausted
SMC_STEP_BUDGET = int(os.getenv('SMC_STEP_BUDGET', '10000'))

# maximum gates and maximum wire width of any diagram
SMC_DIAGRAM_CAPACITY = int(os.getenv('SMC_DIAGRAM_CAPACITY', '64'))

# directory holding the critical peak list f_peaks.txt
SMC_FIXTURES_DIR = Path(os.getenv('SMC_FIXTURES_DIR', BASE_DIR / 'peaks' / 'fixtures'))

# how many seeded random strategies the confluence checks compare
SMC_RANDOM_SEEDS = int(os.getenv('SMC_RANDOM_SEEDS', '10'))

# how many reverse steps the Kelly expansion search may climb to find a lift
SMC_EXPANSION_LIFT_DEPTH = int(os.getenv('SMC_EXPANSION_LIFT_DEPTH', '1'))

# paths a Kelly derivation may visit before giving up
SMC_EXPANSION_BUDGET = int(os.getenv('SMC_EXPANSION_BUDGET', '200000'))


# ----------------------
# Logging
# ----------------------

SMC_LOG_LEVEL = os.getenv('SMC_LOG_LEVEL', 'WARNING')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        name: {'handlers': ['console'], 'level': SMC_LOG_LEVEL, 'propagate': False}
        for name in ('diagrams', 'rewriting', 'termination', 'peaks', 'coherence')
    },
}
