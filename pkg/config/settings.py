# config/settings.py
import os
import dotenv
from pathlib import Path
import dj_database_url


BASE_DIR = Path(__file__).resolve().parent.parent
dotenv.load_dotenv()


SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', "hspan-local-only")

DEBUG = os.getenv('DJANGO_DEBUG', 'True') == 'True'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # Third party
    'rest_framework',

    # Local
    'core',
]


DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

# Override DB in production
DATABASE_URL = os.getenv("DATABASE_URL")

if DATABASE_URL:
    DATABASES["default"] = dj_database_url.parse(
        DATABASE_URL,
        conn_max_age=0,
    )

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True


# Harmonic span engine
HSPAN_PRECISION_START_BITS = int(os.getenv('HSPAN_PRECISION_START_BITS', '96'))
HSPAN_PRECISION_CAP_BITS = int(os.getenv('HSPAN_PRECISION_CAP_BITS', '65536'))
HSPAN_MAGNITUDE_CAP = int(os.getenv('HSPAN_MAGNITUDE_CAP', '64'))
HSPAN_DIRECT_SUM_THRESHOLD = int(os.getenv('HSPAN_DIRECT_SUM_THRESHOLD', '1000000'))
HSPAN_ORACLE_CAP = int(os.getenv('HSPAN_ORACLE_CAP', '10000'))
HSPAN_SWEEP_JOBS = int(os.getenv('HSPAN_SWEEP_JOBS', '1'))
HSPAN_SUM_DIGITS = int(os.getenv('HSPAN_SUM_DIGITS', '10'))
HSPAN_TABLE_GOLDEN = BASE_DIR / 'core' / 'fixtures' / 'printed_table.csv'


# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
        'file': {
            'class': 'logging.FileHandler',
            'filename': os.getenv('HSPAN_LOG_FILE', 'hspan.log'),
            'formatter': 'verbose',
            'delay': True,
        },
    },
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.getenv('DJANGO_LOG_LEVEL', 'INFO'),
        },
        'core': {
            'handlers': ['console', 'file'],
            'level': os.getenv('HSPAN_LOG_LEVEL', 'WARNING'),
            'propagate': True,
        },
    },
}
