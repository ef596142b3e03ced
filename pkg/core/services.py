# core/services.py

import csv
import logging
import django
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional

from django.db import transaction

from core.bounds import f_bounds, midpoint_candidates
from core.exceptions import BracketingError, CapExceeded, HarmonicSpanError
from core.oracle import DEFAULT_ORACLE_CAP, brute_force_f, replicate_float_program
from core.realnum import DEFAULT_POLICY, PrecisionPolicy, compare_span_to_target
from core.serializers import TableRowSerializer
from core.types import (
    Backend, Certificate, Comparison, SpanQuery, SpanResult, TheoremReport, Verdict,
    validate_query,
)

logger = logging.getLogger(__name__)


class _MonotoneSearch:
    """
    Binary search for the largest f with Q_m^{m+f-1} < q*r.

    The predicate is true for every f below the answer and false above it,
    since all terms are positive. Every comparison is kept for the
    certificate.
    """

    def __init__(self, query: SpanQuery, policy: PrecisionPolicy):
        self.query = query
        self.policy = policy
        self.outcomes = {}
        self.comparisons = []

    def below(self, f: int) -> bool:
        if f not in self.outcomes:
            m = self.query.m
            outcome = compare_span_to_target(m, m + f - 1, self.query.target, self.policy)
            self.outcomes[f] = outcome
            self.comparisons.append(Comparison(outcome.n, outcome.verdict, outcome.precision_bits))
        return self.outcomes[f].verdict is Verdict.LESS

    def run(self, window):
        low, high = window.lb, window.ub + 1
        step = max(window.width_cap, 1)
        errata = []

        if not self.below(low):
            errata.append(f"f is below the closed-form lower bound {window.lb}")
            logger.warning(f"{self.query}: lower bound {window.lb} too high, widening window")
            while not self.below(low):
                if low == 1:
                    raise BracketingError(f"{self.query}: a single term already reaches the target")
                high = low
                low = max(1, low - step)
                step *= 2

        step = max(window.width_cap, 1)
        if self.below(high):
            errata.append(f"f is above the closed-form upper bound {window.ub}")
            logger.warning(f"{self.query}: upper bound {window.ub} too low, widening window")
            while self.below(high):
                low = high
                high += step
                step *= 2

        while high - low > 1:
            mid = (low + high) // 2
            if self.below(mid):
                low = mid
            else:
                high = mid

        return low, ('; '.join(errata) or None)


class SpanSolverService:
    """Certified term counts for span queries"""

    @staticmethod
    def solve_f(query: SpanQuery, policy: PrecisionPolicy = DEFAULT_POLICY,
                exact: bool = False, oracle_cap: int = DEFAULT_ORACLE_CAP) -> SpanResult:
        """
        Unique f with Q_m^{m+f-1} < q*r < Q_m^{m+f}.

        exact=True delegates to the rational oracle and reports exact sums;
        otherwise the closed-form window is searched with interval
        comparisons.
        """
        window = f_bounds(query, policy)
        if exact:
            return SpanSolverService._solve_exact(query, window, oracle_cap)

        search = _MonotoneSearch(query, policy)
        f, erratum = search.run(window)

        below = search.outcomes.get(f)
        above = search.outcomes.get(f + 1)
        if below is None or above is None or below.verdict is not Verdict.LESS \
                or above.verdict is not Verdict.GREATER:
            raise BracketingError(f"{query}: search ended without a strict bracket around f={f}")

        backend = Backend.ASYMPTOTIC if Backend.ASYMPTOTIC in (below.backend, above.backend) else Backend.INTERVAL
        certificate = Certificate(
            comparisons=tuple(search.comparisons),
            final_precision_bits=max(c.precision_bits for c in search.comparisons),
        )
        logger.info(f"Solved {query}: f={f} in {len(search.comparisons)} comparisons ({backend.value})")
        return SpanResult(
            query=query,
            f=f,
            sum_below=below.enclosure / query.r,
            sum_above=above.enclosure / query.r,
            backend=backend,
            certificate=certificate,
            window=window,
            erratum=erratum,
        )

    @staticmethod
    def _solve_exact(query, window, oracle_cap):
        oracle = brute_force_f(query, cap=oracle_cap)
        f = oracle.f
        erratum = None
        if f not in window:
            erratum = f"f={f} outside the closed-form window [{window.lb}, {window.ub}]"
            logger.warning(f"{query}: {erratum}")
        certificate = Certificate(
            comparisons=(
                Comparison(query.m + f - 1, Verdict.LESS, 0),
                Comparison(query.m + f, Verdict.GREATER, 0),
            ),
            final_precision_bits=0,
        )
        return SpanResult(
            query=query,
            f=f,
            sum_below=oracle.sum_below,
            sum_above=oracle.sum_above,
            backend=Backend.EXACT,
            certificate=certificate,
            window=window,
            erratum=erratum,
        )


class TheoremService:

    @staticmethod
    def verify_theorems(query: SpanQuery, result: SpanResult,
                        policy: PrecisionPolicy = DEFAULT_POLICY) -> TheoremReport:
        """Check the window, midpoint and width claims against a solved f"""
        window = result.window
        f = result.f
        details = []

        bounds_hold = f in window
        details.append(
            f"bounds: {window.lb} <= {f} <= {window.ub}" if bounds_hold
            else f"bounds VIOLATED: {f} not in [{window.lb}, {window.ub}]"
        )

        midpoint_holds = None
        if query.is_unit:
            candidates = midpoint_candidates(query.m, policy)
            midpoint_holds = f in candidates
            details.append(
                f"midpoint: {f} in {candidates.candidates}" if midpoint_holds
                else f"midpoint VIOLATED: {f} not in {candidates.candidates}"
            )
        else:
            details.append("midpoint: not applicable (q*r != 1)")

        window_width_ok = window.width <= window.width_cap
        details.append(
            f"width: {window.width} <= {window.width_cap}" if window_width_ok
            else f"width VIOLATED: {window.width} > {window.width_cap}"
        )

        report = TheoremReport(
            bounds_hold=bounds_hold,
            midpoint_holds=midpoint_holds,
            window_width_ok=window_width_ok,
            details=tuple(details),
        )
        if not report.all_hold:
            logger.warning(f"Theorem check failed for {query}: {'; '.join(details)}")
        return report


@dataclass(frozen=True)
class SweepRecord:
    raw: tuple
    query: Optional[SpanQuery] = None
    result: Optional[SpanResult] = None
    report: Optional[TheoremReport] = None
    oracle_f: Optional[int] = None
    error: Optional[str] = None

    @property
    def oracle_agrees(self) -> Optional[bool]:
        if self.oracle_f is None or self.result is None:
            return None
        return self.oracle_f == self.result.f

    @property
    def ok(self) -> bool:
        return (
            self.error is None
            and self.report is not None
            and self.report.all_hold
            and self.oracle_agrees is not False
        )


def _sweep_one(payload):
    """Solve and check one query; runs in worker processes"""
    query, policy, oracle_cap = payload
    try:
        result = SpanSolverService.solve_f(query, policy)
        report = TheoremService.verify_theorems(query, result, policy)
    except HarmonicSpanError as e:
        logger.error(f"Sweep failed for {query}: {str(e)}")
        return SweepRecord(raw=query.as_tuple(), query=query, error=f"{type(e).__name__}: {e}")

    oracle_f = None
    if oracle_cap:
        try:
            oracle_f = brute_force_f(query, cap=oracle_cap).f
        except CapExceeded:
            pass
    if oracle_f is not None and oracle_f != result.f:
        logger.error(f"Oracle disagreement for {query}: oracle f={oracle_f}, solver f={result.f}")
    return SweepRecord(
        raw=query.as_tuple(), query=query, result=result, report=report, oracle_f=oracle_f,
    )


class SweepService:

    @staticmethod
    def sweep(m_values: Iterable[int], q_values: Iterable[int], r_values: Iterable[int],
              policy: PrecisionPolicy = DEFAULT_POLICY, jobs: int = 1, oracle_cap: int = 0,
              magnitude_cap: Optional[int] = None) -> List[SweepRecord]:
        """
        One record per (m, q, r), ordered by m, then q, then r.

        Per-query errors are captured on the record; the sweep never aborts.
        """
        records = []
        payloads = []
        slots = []
        for m in m_values:
            for q in q_values:
                for r in r_values:
                    try:
                        query = validate_query(m, q, r, magnitude_cap=magnitude_cap)
                    except HarmonicSpanError as e:
                        records.append(SweepRecord(raw=(m, q, r), error=f"{type(e).__name__}: {e}"))
                        continue
                    slots.append(len(records))
                    records.append(None)
                    payloads.append((query, policy, oracle_cap))

        if jobs > 1 and len(payloads) > 1:
            chunksize = max(1, len(payloads) // (jobs * 4))
            # workers rebuild the app registry before unpickling any task
            with ProcessPoolExecutor(max_workers=jobs, initializer=django.setup) as executor:
                outcomes = list(executor.map(_sweep_one, payloads, chunksize=chunksize))
        else:
            outcomes = [_sweep_one(payload) for payload in payloads]

        for slot, outcome in zip(slots, outcomes):
            records[slot] = outcome

        logger.info(f"Sweep finished: {len(records)} queries, {sum(1 for r in records if not r.ok)} flagged")
        return records


class ErratumService:
    """Persistence of errata found by table runs and sweeps"""

    @staticmethod
    def record(kind, query: SpanQuery, expected, observed, certificate=None, detail=""):
        """
        Store one erratum.

        Returns:
            tuple: (success: bool, erratum: Erratum or None, error_message: str)
        """
        from core.models import Erratum

        try:
            with transaction.atomic():
                erratum = Erratum.objects.create(
                    kind=kind,
                    m=query.m,
                    q=query.q,
                    r=query.r,
                    expected=str(expected),
                    observed=str(observed),
                    certificate=certificate.as_dict() if certificate is not None else {},
                    detail=detail,
                )
            logger.warning(f"Erratum recorded: {erratum}")
            return True, erratum, ""
        except Exception as e:
            logger.error(f"Error recording erratum: {str(e)}")
            return False, None, f"Internal error: {str(e)}"

    @staticmethod
    def record_sweep(record: SweepRecord):
        """All errata implied by one sweep record"""
        from core.models import Erratum

        stored = []
        if record.result is None or record.report is None:
            return stored
        result, report = record.result, record.report
        window = result.window
        checks = [
            (report.bounds_hold, Erratum.Kind.BOUNDS, f"[{window.lb}, {window.ub}]"),
            (report.midpoint_holds is not False, Erratum.Kind.MIDPOINT, f"{{{window.ml}, {window.mh}}}"),
            (report.window_width_ok, Erratum.Kind.WINDOW_WIDTH, f"<= {window.width_cap}"),
            (record.oracle_agrees is not False, Erratum.Kind.ORACLE, f"oracle f={record.oracle_f}"),
        ]
        for holds, kind, expected in checks:
            if holds:
                continue
            success, erratum, _ = ErratumService.record(
                kind, record.query, expected, f"f={result.f}", result.certificate,
                detail='; '.join(report.details),
            )
            if success:
                stored.append(erratum)
        return stored


@dataclass(frozen=True)
class TableRow:
    en: int
    m: int
    q: int
    r: int
    lb: int
    ml: int
    rv: int
    mh: int
    ub: int

    @property
    def query(self) -> SpanQuery:
        return SpanQuery(self.m, self.q, self.r)

    def values(self):
        return {'LB': self.lb, 'ML': self.ml, 'RV': self.rv, 'MH': self.mh, 'UB': self.ub}

    def as_csv_row(self):
        return [self.en, self.m, self.q, self.r, self.lb, self.ml, self.rv, self.mh, self.ub]


class PrintedTableService:
    """Recompute the EN,m,q,r,LB,ML,RV,MH,UB table from its (m, q, r) inputs"""

    @staticmethod
    def load_golden(path) -> List[dict]:
        with open(Path(path), newline='') as handle:
            rows = list(csv.DictReader(handle))
        validated = []
        for line, row in enumerate(rows, 2):
            serializer = TableRowSerializer(data=row)
            if not serializer.is_valid():
                raise ValueError(f"{path}:{line}: {dict(serializer.errors)}")
            validated.append(dict(serializer.validated_data))
        return validated

    @staticmethod
    def recompute(golden_rows, policy: PrecisionPolicy = DEFAULT_POLICY,
                  magnitude_cap: Optional[int] = None) -> List[TableRow]:
        computed = []
        for row in golden_rows:
            query = validate_query(row['m'], row['q'], row['r'], magnitude_cap=magnitude_cap)
            result = SpanSolverService.solve_f(query, policy)
            window = result.window
            computed.append(TableRow(
                en=row['EN'], m=query.m, q=query.q, r=query.r,
                lb=window.lb, ml=window.ml, rv=result.f, mh=window.mh, ub=window.ub,
            ))
        return computed

    @staticmethod
    def diff(golden_rows, computed: List[TableRow]) -> List[str]:
        """One line per printed cell that differs from the recomputed one"""
        mismatches = []
        for expected, row in zip(golden_rows, computed):
            for column, value in row.values().items():
                printed = expected.get(column)
                if printed is not None and printed != value:
                    mismatches.append(f"EN {row.en} {column}: printed {printed}, computed {value}")
        return mismatches

    @staticmethod
    def replica_divergences(computed: List[TableRow]) -> List[str]:
        """Cells where the double-precision program disagrees with the certified values"""
        divergences = []
        for row in computed:
            try:
                replica = replicate_float_program(row.query)
            except CapExceeded as e:
                divergences.append(f"EN {row.en}: replica not run ({e})")
                continue
            pairs = {
                'LB': replica.lower_bound, 'ML': replica.midlow, 'RV': replica.real_value,
                'MH': replica.midhigh, 'UB': replica.upper_bound,
            }
            for column, value in row.values().items():
                if column == 'LB':
                    # the replica does not clamp
                    value = row.lb if row.lb > 1 else pairs['LB']
                if pairs[column] != value:
                    divergences.append(f"EN {row.en} {column}: double program {pairs[column]}, certified {value}")
        return divergences
