"""
Metrics for twisted torsion computations
"""

import logging
import time
from contextlib import contextmanager
from typing import Iterator

from prometheus_client import CollectorRegistry, Counter, Gauge, Histogram, write_to_textfile

logger = logging.getLogger(__name__)

REGISTRY = CollectorRegistry()

COMPUTATION_COUNT = Counter(
    'twisted_torsion_computations_total',
    'Total number of computations',
    ['operation'],
    registry=REGISTRY,
)

CHECK_OUTCOMES = Counter(
    'twisted_torsion_check_outcomes_total',
    'Theorem check outcomes',
    ['check', 'outcome'],
    registry=REGISTRY,
)

OPERATION_DURATION = Histogram(
    'twisted_torsion_operation_duration_seconds',
    'Operation duration in seconds',
    ['operation'],
    registry=REGISTRY,
)

CORPUS_SIZE = Gauge(
    'twisted_torsion_corpus_size',
    'Number of representations in the last enumerated corpus',
    registry=REGISTRY,
)


def increment_computation(operation: str):
    """
    Increment computation counter

    Args:
        operation: Name of the operation, e.g. "wada_invariant"
    """
    COMPUTATION_COUNT.labels(operation=operation).inc()


def record_check(check: str, outcome: str):
    """
    Record a theorem check outcome

    Args:
        check: Name of the check
        outcome: "pass", "fail" or "inconclusive"
    """
    CHECK_OUTCOMES.labels(check=check, outcome=outcome).inc()


def observe_duration(operation: str, duration: float):
    """
    Record operation duration

    Args:
        operation: Name of the operation
        duration: Duration in seconds
    """
    OPERATION_DURATION.labels(operation=operation).observe(duration)


def set_corpus_size(count: int):
    """
    Set the size of the representation corpus

    Args:
        count: Number of representations enumerated for the run
    """
    CORPUS_SIZE.set(count)


@contextmanager
def timed(operation: str) -> Iterator[None]:
    """Count and time the enclosed block"""
    start_time = time.time()
    try:
        yield
    finally:
        increment_computation(operation)
        observe_duration(operation, time.time() - start_time)


def write_metrics(path: str):
    """Write the registry in Prometheus text format"""
    write_to_textfile(path, REGISTRY)
    logger.info(f"Metrics written to {path}")
