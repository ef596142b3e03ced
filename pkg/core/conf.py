# core/conf.py
from dataclasses import dataclass
from pathlib import Path

from django.conf import settings


@dataclass(frozen=True)
class EngineSettings:
    """Snapshot of the HSPAN_* settings, taken once per invocation"""
    start_bits: int
    cap_bits: int
    magnitude_cap: int
    direct_threshold: int
    oracle_cap: int
    sweep_jobs: int
    sum_digits: int
    table_golden: Path


def engine_settings() -> EngineSettings:
    return EngineSettings(
        start_bits=settings.HSPAN_PRECISION_START_BITS,
        cap_bits=settings.HSPAN_PRECISION_CAP_BITS,
        magnitude_cap=settings.HSPAN_MAGNITUDE_CAP,
        direct_threshold=settings.HSPAN_DIRECT_SUM_THRESHOLD,
        oracle_cap=settings.HSPAN_ORACLE_CAP,
        sweep_jobs=settings.HSPAN_SWEEP_JOBS,
        sum_digits=settings.HSPAN_SUM_DIGITS,
        table_golden=Path(settings.HSPAN_TABLE_GOLDEN),
    )


def default_policy(start_bits=None):
    from core.realnum import PrecisionPolicy

    conf = engine_settings()
    return PrecisionPolicy(
        start_bits=conf.start_bits if start_bits is None else start_bits,
        cap_bits=conf.cap_bits,
        direct_threshold=conf.direct_threshold,
    )
