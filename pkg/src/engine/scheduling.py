"""
Scheduling rules
Positioning policies for priority derivations and selection rules for list derivations
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Union

from src.core.errors import EmptyGoal, RuleError
from src.core.priority import (PriorityAtom, PriorityGoal, allocate_above, allocate_below,
                               allocate_between)
from src.core.terms import Atom, Clause

ALL_SELECTIONS = 'all'


def select_atom(goal: PriorityGoal) -> PriorityAtom:
    """The atom of minimum priority"""
    if not goal:
        raise EmptyGoal("Cannot select an atom from the empty goal")
    return goal.first()


class PositioningPolicy(ABC):
    """Pure placement of new body atoms: one fresh priority per atom, disjoint from K"""

    name = 'policy'

    @abstractmethod
    def place(self, rest: PriorityGoal, selected: PriorityAtom, body: Sequence[Atom],
              clause: Clause) -> List[Fraction]:
        """Priorities for body atoms (in body order) given K = rest and the selected atom"""

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"{type(self).__name__}({self.name})"


def _stack_below(rest: PriorityGoal, selected: PriorityAtom, count: int) -> List[Fraction]:
    bound = rest.min_priority() if rest else selected.priority
    return allocate_below(bound, count)


@dataclass(frozen=True)
class StackQueueSplit:
    """Split index of every clause body into stack part and queue part"""
    mode: str = 'clause'  # 'stack', 'queue' or 'clause'
    overrides: Mapping[str, int] = field(default_factory=dict, hash=False)

    def split_for(self, clause: Clause) -> int:
        size = len(clause.body)
        if clause.label in self.overrides:
            return max(0, min(self.overrides[clause.label], size))
        if self.mode == 'stack':
            return size
        if self.mode == 'queue':
            return 0
        return clause.split


class StackQueuePolicy(PositioningPolicy):
    """Stack part below min(K) in body order, queue part above max(K)"""

    def __init__(self, split: StackQueueSplit = StackQueueSplit()):
        self.split = split
        self.name = 'sq' if split.mode == 'clause' else split.mode
        if split.overrides:
            self.name += '+' + ','.join(f"{k}:{v}" for k, v in sorted(split.overrides.items()))

    def place(self, rest, selected, body, clause):
        index = self.split.split_for(clause)
        if rest:
            low, high = rest.min_priority(), rest.max_priority()
        else:
            low = high = selected.priority
        return allocate_below(low, index) + allocate_above(high, len(body) - index)


class CenterInsertPolicy(PositioningPolicy):
    """New atoms contiguous at index len(K)//2 of the old resolvent"""

    name = 'center'

    def place(self, rest, selected, body, clause):
        if not rest:
            return _stack_below(rest, selected, len(body))
        priorities = rest.priorities()
        index = len(priorities) // 2
        low = priorities[index - 1] if index > 0 else None
        high = priorities[index] if index < len(priorities) else None
        return allocate_between(low, high, len(body))


class PredSpecialPolicy(PositioningPolicy):
    """All-stack, except after the first old atom when a special predicate is rewritten"""

    def __init__(self, special: str):
        self.special = special
        self.name = f"pred-special:{special}"

    def place(self, rest, selected, body, clause):
        if selected.atom.predicate != self.special or not rest:
            return _stack_below(rest, selected, len(body))
        priorities = rest.priorities()
        high = priorities[1] if len(priorities) > 1 else None
        return allocate_between(priorities[0], high, len(body))


class ReplayPlacementPolicy(PositioningPolicy):
    """Places new atoms at explicitly given priorities"""

    name = 'replay'

    def __init__(self, priorities: Sequence):
        self.priorities = [Fraction(p) for p in priorities]

    def place(self, rest, selected, body, clause):
        if len(body) != len(self.priorities):
            raise RuleError(f"Replay placement has {len(self.priorities)} priorities for {len(body)} atoms")
        if set(self.priorities) & set(rest.priorities()):
            raise RuleError("Replay placement reuses priorities of the old resolvent")
        return list(self.priorities)


def make_stack_queue_rule(split: StackQueueSplit = StackQueueSplit()) -> StackQueuePolicy:
    return StackQueuePolicy(split)


def make_center_insert_rule() -> CenterInsertPolicy:
    return CenterInsertPolicy()


def make_pred_special_rule(special_pred: str) -> PredSpecialPolicy:
    return PredSpecialPolicy(special_pred)


def is_stack_queue_policy(policy) -> bool:
    return isinstance(policy, StackQueuePolicy)


class ListSelectionRule(ABC):
    """Pure choice of the atom to rewrite in a goal read as a list"""

    name = 'selection'

    @abstractmethod
    def select(self, atoms: Sequence[Atom]) -> int:
        pass

    def __call__(self, atoms: Sequence[Atom]) -> int:
        if not atoms:
            raise EmptyGoal("Cannot select an atom from the empty goal")
        return self.select(atoms)

    def __str__(self):
        return self.name


class LeftmostSelection(ListSelectionRule):
    name = 'leftmost'

    def select(self, atoms):
        return 0


class RightmostSelection(ListSelectionRule):
    name = 'rightmost'

    def select(self, atoms):
        return len(atoms) - 1


class OddEvenSelection(ListSelectionRule):
    """First atom for odd lengths, last atom for even lengths"""
    name = 'odd-even'

    def select(self, atoms):
        return 0 if len(atoms) % 2 == 1 else len(atoms) - 1


class IndexSelection(ListSelectionRule):
    """Fixed index; used to enumerate every selection in S-trees"""

    def __init__(self, index: int):
        self.index = index
        self.name = f"index:{index}"

    def select(self, atoms):
        if not 0 <= self.index < len(atoms):
            raise RuleError(f"Selection index {self.index} out of range for {len(atoms)} atoms")
        return self.index


def make_odd_even_selection() -> OddEvenSelection:
    return OddEvenSelection()


LIST_RULES: Dict[str, type] = {
    'leftmost': LeftmostSelection,
    'rightmost': RightmostSelection,
    'odd-even': OddEvenSelection,
}


def policy_from_name(name: str, overrides: Mapping[str, int] = None) -> PositioningPolicy:
    """stack, queue, sq, center or pred-special:<predicate>"""
    overrides = dict(overrides or {})
    if name in ('stack', 'queue', 'sq'):
        return make_stack_queue_rule(StackQueueSplit('clause' if name == 'sq' else name, overrides))
    if name == 'center':
        return make_center_insert_rule()
    if name.startswith('pred-special:'):
        special = name.split(':', 1)[1]
        if not special:
            raise RuleError("pred-special needs a predicate, e.g. pred-special:s")
        return make_pred_special_rule(special)
    if name in LIST_RULES or name == ALL_SELECTIONS:
        raise RuleError(f"Rule '{name}' exists only in list mode (sld, rsld)")
    raise RuleError(f"Unknown scheduling rule '{name}'")


def selection_from_name(name: str) -> Union[ListSelectionRule, str]:
    """leftmost, rightmost, odd-even, or 'all' (trees only); stack is leftmost"""
    if name == 'stack':
        return LeftmostSelection()
    if name == ALL_SELECTIONS:
        return ALL_SELECTIONS
    if name in LIST_RULES:
        return LIST_RULES[name]()
    raise RuleError(f"Rule '{name}' is not a list selection rule")


def rule_from_name(name: str, list_mode: bool):
    return selection_from_name(name) if list_mode else policy_from_name(name)


def is_stack_queue_shaped(rest: PriorityGoal, new_priorities: Sequence[Fraction]) -> bool:
    """New atoms split as M_s -| K -| M_q with body order preserved"""
    new_priorities = list(new_priorities)
    if any(low >= high for low, high in zip(new_priorities, new_priorities[1:])):
        return False
    if not rest:
        return True
    low, high = rest.min_priority(), rest.max_priority()
    index = 0
    while index < len(new_priorities) and new_priorities[index] < low:
        index += 1
    return all(p > high for p in new_priorities[index:])
