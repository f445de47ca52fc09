"""
Finiteness of the equality loop check on function-free programs
"""
import random
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence, Tuple

from src.core.priority import PriorityGoal
from src.core.terms import Renaming, Struct, has_function_symbols, vars_of
from src.engine.derivation import DerivationStatus, DeriveOptions, Resultant, derive
from src.engine.loop_check import EVRL, resultant_equivalent
from src.engine.scheduling import rule_from_name
from src.lab import generators as gen
from src.lab.report import CheckReport, TrialResult, run_trials
from src.lab.search import random_chooser, random_derivation
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('lab.finiteness')

LOOP_VOCABULARY = gen.Vocabulary(predicates=(('p', 1), ('q', 1)), constants=('a', 'b'),
                                 variables=('x', 'y'), max_goal=1, max_body=2)


@lru_cache(maxsize=None)
def _fillings(slots: int, constants: int) -> int:
    """Ways to fill argument slots with constants or canonically numbered variables"""
    # ways[m]: fillings of the slots seen so far that use m distinct variables
    ways = {0: 1}
    for _ in range(slots):
        step = {}
        for used, count in ways.items():
            step[used] = step.get(used, 0) + count * (constants + used)
            step[used + 1] = step.get(used + 1, 0) + count
        ways = step
    return sum(ways.values())


def enumerate_resultant_classes(predicates: Sequence[Tuple[str, int]], constants: int, goal_length: int,
                                max_length: int) -> int:
    """Number of resultant classes with an instantiated goal of goal_length atoms and at most
    max_length reduced atoms, over a function-free signature"""
    total = 0
    arities = [arity for _, arity in predicates]
    for length in range(goal_length, goal_length + max_length + 1):
        for choice in product(arities, repeat=length):
            total += _fillings(sum(choice), constants)
    return total


def loop_check_bound(program, goal: PriorityGoal, max_length: int) -> int:
    """Class count for the predicates and constants occurring in program and goal"""
    atoms = list(goal.sequence())
    for clause in program:
        atoms.extend((clause.head,) + clause.body)
    signature = {atom.signature for atom in atoms}
    constants = {arg.functor for atom in atoms for arg in atom.args if isinstance(arg, Struct)}
    return enumerate_resultant_classes(sorted(signature), len(constants), len(goal), max_length)


def loop_check_trial(program, goal: PriorityGoal, rule, mode: str, max_length: int,
                     rng: Optional[random.Random] = None) -> TrialResult:
    """A derivation whose resolvents stay within max_length atoms stops within the class count"""
    if has_function_symbols(list(program.clauses) + list(goal.sequence())):
        return TrialResult.skip("function symbols")
    bound = loop_check_bound(program, goal, max_length)
    options = DeriveOptions.from_config(max_steps=bound, loop_check=EVRL)
    chooser = random_chooser(rng) if rng is not None else None
    record = derive(program, goal, mode, rule, options, chooser)
    if max(record.reduced_lengths()) > max_length:
        return TrialResult.skip(f"a resolvent exceeds {max_length} atoms")
    if record.status == DerivationStatus.BOUND_EXCEEDED:
        return TrialResult.fail(f"{bound + 1} resultants of length at most {max_length} and no prune",
                                goal=str(goal), program=str(program), template=record.labels())
    return TrialResult.ok(**{record.status.value: 1})


def check_loop_check_finiteness(trials: Optional[int] = None, seed: Optional[int] = None,
                                workers: Optional[int] = None, max_length: int = 2,
                                mode: str = 'rsld', rule_name: Optional[str] = None) -> CheckReport:
    rule_name = rule_name or ('leftmost' if mode in ('sld', 'rsld') else 'stack')
    rule = rule_from_name(rule_name, mode in ('sld', 'rsld'))

    def trial(rng: random.Random, index: int) -> TrialResult:
        program = gen.random_program(rng, LOOP_VOCABULARY, filler=False)
        goal = gen.random_goal(rng, LOOP_VOCABULARY, 1)
        return loop_check_trial(program, goal, rule, mode, max_length, rng)

    trials = config.get('check_trials', 1000) if trials is None else trials
    seed = config.default_seed() if seed is None else seed
    workers = config.get('workers', 1) if workers is None else workers
    return run_trials(f"loop-check-finiteness[{mode}]", trial, trials, seed, workers)


def _renamed(resultant: Resultant, renaming: Renaming) -> Resultant:
    return Resultant(resultant.reduced.apply(renaming), resultant.instantiated_goal.apply(renaming))


def _equivalent(first: Resultant, second: Resultant, mode: str, variant: str) -> bool:
    return resultant_equivalent(first, second, mode, variant) is not None


def check_resultant_equivalence(trials: Optional[int] = None, seed: Optional[int] = None,
                                workers: Optional[int] = None, variant: str = EVRL,
                                mode: str = 'priority') -> CheckReport:
    """Resultant equivalence is reflexive, symmetric, transitive and closed under renaming"""
    policy = rule_from_name('stack', False)

    def trial(rng: random.Random, index: int) -> TrialResult:
        program = gen.random_program(rng, LOOP_VOCABULARY, filler=False)
        goal = gen.random_goal(rng, LOOP_VOCABULARY, rng.randint(1, 2))
        record = random_derivation(program, goal, policy, rng, rng.randint(1, 6), 'prsld')
        resultants = record.resultants()
        for resultant in resultants:
            if not _equivalent(resultant, resultant, mode, variant):
                return TrialResult.fail("not reflexive", resultant=str(resultant))
            names = vars_of(list(resultant.reduced.sequence()) + list(resultant.instantiated_goal.sequence()))
            copy = _renamed(resultant, gen.random_renaming(rng, names))
            if not _equivalent(resultant, copy, mode, variant):
                return TrialResult.fail("not closed under renaming", resultant=str(resultant))
        related = 0
        for first, second in product(resultants, repeat=2):
            forward = _equivalent(first, second, mode, variant)
            if forward != _equivalent(second, first, mode, variant):
                return TrialResult.fail("not symmetric", first=str(first), second=str(second))
            related += int(forward)
        for first, second, third in product(resultants, repeat=3):
            if (_equivalent(first, second, mode, variant) and _equivalent(second, third, mode, variant)
                    and not _equivalent(first, third, mode, variant)):
                return TrialResult.fail("not transitive", first=str(first), second=str(second),
                                        third=str(third))
        return TrialResult.ok(related_pairs=related)

    trials = config.get('check_trials', 1000) if trials is None else trials
    seed = config.default_seed() if seed is None else seed
    workers = config.get('workers', 1) if workers is None else workers
    return run_trials(f"resultant-equivalence[{variant}]", trial, trials, seed, workers)
