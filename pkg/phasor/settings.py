import os
from pathlib import Path
from dotenv import load_dotenv


load_dotenv()
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'phasor-local-only-key')

DEBUG = os.getenv('DEBUG', 'False').lower() == 'true'

INSTALLED_APPS = [
    'phaseplot',
]

# Nothing is persisted; jobs read expressions and write images or text.
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# Phase plot config
PHASEPLOT_THREADS = int(os.getenv('PHASEPLOT_THREADS', '1'))
PHASEPLOT_LOG_LEVEL = os.getenv('PHASEPLOT_LOG_LEVEL', 'WARNING').upper()
PHASEPLOT_WP_SHELLS = int(os.getenv('PHASEPLOT_WP_SHELLS', '40'))
PHASEPLOT_OUTPUT_DIR = Path(os.getenv('PHASEPLOT_OUTPUT_DIR', '.'))

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
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'phaseplot': {
            'handlers': ['console'],
            'level': PHASEPLOT_LOG_LEVEL,
            'propagate': False,
        },
    },
}
