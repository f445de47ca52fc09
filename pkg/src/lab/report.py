"""
Check reports and the seeded trial runner
"""
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from src.core.errors import NoWitnessDerivation
from src.utils.log import get_logger

logger = get_logger('lab.report')

PASSED = 'passed'
FAILED = 'failed'
INCONCLUSIVE = 'inconclusive'

PASS = 'pass'
FAIL = 'fail'
SKIP = 'skip'
BUDGET = 'budget'


@dataclass
class TrialResult:
    """Outcome of one trial"""
    status: str = PASS
    message: str = ''
    instance: Dict[str, Any] = field(default_factory=dict)
    counts: Dict[str, int] = field(default_factory=dict)

    @classmethod
    def ok(cls, **counts) -> 'TrialResult':
        return cls(PASS, counts=counts)

    @classmethod
    def fail(cls, message: str, **instance) -> 'TrialResult':
        return cls(FAIL, message, instance)

    @classmethod
    def skip(cls, message: str = '') -> 'TrialResult':
        return cls(SKIP, message)

    @classmethod
    def budget(cls, message: str = '') -> 'TrialResult':
        return cls(BUDGET, message)


@dataclass
class CheckFailure:
    """A counterexample with what is needed to replay it"""
    trial: int
    seed: Optional[int]
    message: str
    instance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'trial': self.trial, 'seed': self.seed, 'message': self.message,
                'instance': self.instance}


@dataclass
class CheckReport:
    name: str
    trials: int = 0
    failures: List[CheckFailure] = field(default_factory=list)
    skipped: int = 0
    budget_exhausted: int = 0
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        if self.failures:
            return FAILED
        if self.budget_exhausted and self.trials == self.skipped + self.budget_exhausted:
            return INCONCLUSIVE
        return PASSED

    @property
    def passed(self) -> bool:
        return self.verdict == PASSED

    def add(self, index: int, seed: Optional[int], result: TrialResult):
        self.trials += 1
        for key, value in result.counts.items():
            self.details[key] = self.details.get(key, 0) + value
        if result.status == FAIL:
            self.failures.append(CheckFailure(index, seed, result.message, result.instance))
        elif result.status == SKIP:
            self.skipped += 1
        elif result.status == BUDGET:
            self.budget_exhausted += 1

    def merge(self, other: 'CheckReport') -> 'CheckReport':
        self.trials += other.trials
        self.failures.extend(other.failures)
        self.skipped += other.skipped
        self.budget_exhausted += other.budget_exhausted
        for key, value in other.details.items():
            if isinstance(value, int) and isinstance(self.details.get(key), int):
                self.details[key] += value
            else:
                self.details.setdefault(key, value)
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'verdict': self.verdict,
            'trials': self.trials,
            'skipped': self.skipped,
            'budget_exhausted': self.budget_exhausted,
            'failures': [failure.to_dict() for failure in self.failures],
            'details': self.details,
        }

    def __str__(self):
        text = (f"{self.name}: {self.verdict} ({self.trials} trials, {len(self.failures)} failures, "
                f"{self.skipped} skipped")
        if self.budget_exhausted:
            text += f", {self.budget_exhausted} out of budget"
        return text + ")"


TrialFunction = Callable[[random.Random, int], TrialResult]


def trial_rng(seed: int, index: int) -> random.Random:
    """Generator owned by one trial, independent of execution order"""
    return random.Random(f"{seed}:{index}")


def _guarded(trial_fn: TrialFunction, seed: int, index: int, missing_witness: str = SKIP) -> TrialResult:
    try:
        return trial_fn(trial_rng(seed, index), index)
    except NoWitnessDerivation as e:
        return TrialResult(missing_witness, str(e))


def replay_trial(trial_fn: TrialFunction, seed: int, index: int, missing_witness: str = SKIP) -> TrialResult:
    return _guarded(trial_fn, seed, index, missing_witness)


def run_trials(name: str, trial_fn: TrialFunction, trials: int, seed: int = 0,
               workers: int = 1, missing_witness: str = SKIP) -> CheckReport:
    """Run trials 0..trials-1; results are collected in trial order

    missing_witness is the status given to trials raising NoWitnessDerivation, SKIP or BUDGET
    """
    report = CheckReport(name)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(lambda i: _guarded(trial_fn, seed, i, missing_witness),
                                        range(trials)))
    else:
        results = [_guarded(trial_fn, seed, i, missing_witness) for i in range(trials)]
    for index, result in enumerate(results):
        report.add(index, seed, result)
    logger.info("%s", report)
    if report.budget_exhausted:
        logger.warning("%s: %d trials found no witness within the search bounds", name, report.budget_exhausted)
    return report
