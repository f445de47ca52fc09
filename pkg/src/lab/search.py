"""
Bounded derivation search
Template replay, random clause choice and depth-first search with a node budget
"""
import random
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Sequence, Set, Tuple

from src.core.priority import PriorityGoal
from src.core.terms import Clause, FreshNames, Substitution, vars_of
from src.core.unify import canonical_form
from src.engine.derivation import (DerivationMode, DerivationRecord, DeriveOptions, StepRecord, derive,
                                   list_derivation_step, p_derivation_step, tag_initial_goal)
from src.engine.tree import build_tree
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('lab.search')


def replay_template(program, goal, template: Sequence[Clause], rule, mode='psld',
                    options: Optional[DeriveOptions] = None) -> DerivationRecord:
    """Derivation applying template[k] at step k; it succeeded iff len(record) == len(template)"""
    template = list(template)

    def choose(candidates: List[StepRecord]) -> Optional[StepRecord]:
        for step in candidates:
            if step.index < len(template) and step.clause == template[step.index]:
                return step
        return None

    options = options or DeriveOptions.from_config()
    options = replace(options, max_steps=len(template), loop_check='off')
    return derive(program, goal, mode, rule, options, chooser=choose)


def replays(record: DerivationRecord, template: Sequence[Clause]) -> bool:
    return len(record) == len(template)


def random_chooser(rng: random.Random) -> Callable[[List[StepRecord]], Optional[StepRecord]]:
    return lambda candidates: rng.choice(candidates) if candidates else None


def random_derivation(program, goal, rule, rng: random.Random, max_steps: int, mode='psld',
                      options: Optional[DeriveOptions] = None) -> DerivationRecord:
    """Single derivation with uniformly random clause choice"""
    options = options or DeriveOptions.from_config()
    options = replace(options, max_steps=max_steps, loop_check='off')
    return derive(program, goal, mode, rule, options, chooser=random_chooser(rng))


def enumerate_derivations(program, goal, rule, depth: int, mode='psld',
                          node_budget: Optional[int] = None) -> Iterator[Tuple[List[StepRecord], PriorityGoal]]:
    """Every derivation prefix of at most depth steps, as (steps, last resolvent)"""
    tree = build_tree(program, goal, mode, rule, depth, node_budget=node_budget)
    for node in tree.nodes():
        path = node.path()
        yield [n.step for n in path[1:]], node.reduced


@dataclass
class SearchState:
    """A node of the search: current resolvent and the steps leading to it"""
    goal: PriorityGoal
    steps: Tuple[StepRecord, ...] = ()
    fresh: Optional[FreshNames] = field(default=None, repr=False)
    used: Set[str] = field(default_factory=set, repr=False)
    theta: Substitution = field(default_factory=Substitution, repr=False)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def labels(self) -> List[str]:
        return [step.clause.label for step in self.steps]


@dataclass
class SearchOutcome:
    found: Optional[SearchState] = None
    nodes: int = 0
    exhausted: bool = False

    def __bool__(self):
        return self.found is not None


class _BudgetExhausted(Exception):
    pass


def search_derivations(program, goal, rule, depth: int, accept: Callable[[SearchState], bool],
                       prune: Optional[Callable[[SearchState], bool]] = None,
                       key: Optional[Callable[[SearchState], Hashable]] = None,
                       mode='psld', node_budget: Optional[int] = None,
                       occurs_check: bool = True) -> SearchOutcome:
    """Depth-first search for a derivation prefix satisfying accept"""
    mode = DerivationMode(mode)
    node_budget = config.get('node_budget', 1_000_000) if node_budget is None else node_budget
    clauses = list(program)
    outcome = SearchOutcome()
    # key -> largest remaining depth already explored without success
    explored: Dict[Hashable, int] = {}

    def visit(state: SearchState) -> Optional[SearchState]:
        outcome.nodes += 1
        if outcome.nodes > node_budget:
            raise _BudgetExhausted()
        if accept(state):
            return state
        if state.depth >= depth or not state.goal or (prune is not None and prune(state)):
            return None
        remaining = depth - state.depth
        if key is not None:
            memo = key(state)
            if explored.get(memo, -1) >= remaining:
                return None
        for clause in clauses:
            branch = state.fresh.fork()
            avoid = state.used | state.goal.vars()
            if mode.is_list_mode:
                step = list_derivation_step(state.goal, rule, clause, avoid, branch, state.depth,
                                            occurs_check)
            else:
                step = p_derivation_step(state.goal, clause, rule, avoid, branch, state.depth, occurs_check)
            if step is None:
                continue
            child = SearchState(step.resolvent, state.steps + (step,), branch,
                                state.used | vars_of(step.renamed), state.theta.compose(step.mgu))
            found = visit(child)
            if found is not None:
                return found
        if key is not None:
            explored[memo] = max(explored.get(memo, -1), remaining)
        return None

    start = tag_initial_goal(goal)
    try:
        outcome.found = visit(SearchState(start, (), FreshNames(start.vars()), set(start.vars())))
    except _BudgetExhausted:
        outcome.exhausted = True
        logger.warning("Search budget of %d nodes exhausted", node_budget)
    return outcome


def canonical_key(state: SearchState, extra: Hashable = None) -> Hashable:
    return canonical_form(state.goal.sequence())[0], extra


def superlist_depth(template_length: int) -> int:
    factor = config.get('search_depth_factor', 2)
    return max(factor * template_length, template_length + 2)


def _matched(labels: Sequence[str], template: Sequence[str]) -> int:
    """Length of the longest template prefix that is a subsequence of labels"""
    count = 0
    for label in labels:
        if count < len(template) and label == template[count]:
            count += 1
    return count


def find_template_superlist(program, goal, rule, template: Sequence[str], min_length: int,
                            depth: Optional[int] = None, mode='psld',
                            node_budget: Optional[int] = None) -> SearchOutcome:
    """Derivation whose template contains template as a sublist and whose last resolvent has at least
    min_length atoms"""
    template = list(template)
    depth = superlist_depth(len(template)) if depth is None else depth

    def accept(state: SearchState) -> bool:
        return _matched(state.labels(), template) == len(template) and len(state.goal) >= min_length

    def prune(state: SearchState) -> bool:
        return len(template) - _matched(state.labels(), template) > depth - state.depth

    def key(state: SearchState) -> Hashable:
        return canonical_key(state, _matched(state.labels(), template))

    return search_derivations(program, goal, rule, depth, accept, prune, key, mode, node_budget)
