"""Django test wiring for plain pytest (mirrors what ``manage.py test`` sets up)."""
import os

import django


def pytest_configure(config):
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings")
    django.setup()
    from django.test.utils import setup_databases, setup_test_environment

    setup_test_environment()
    config._django_db_state = setup_databases(verbosity=0, interactive=False)


def pytest_unconfigure(config):
    from django.test.utils import teardown_databases, teardown_test_environment

    state = getattr(config, "_django_db_state", None)
    if state is not None:
        teardown_databases(state, verbosity=0)
    teardown_test_environment()
