"""
Equality variant of resultant loop checks
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

from src.core.errors import PriorityClash, RuleError, ShiftingError
from src.core.priority import Shifting, find_shifting
from src.core.terms import Renaming
from src.core.unify import variant_of
from src.engine.derivation import DerivationMode, DerivationRecord, Resultant

EVRL = 'evrl'
EVGL = 'evgl'
VARIANTS = (EVRL, EVGL)


@dataclass(frozen=True)
class PruneWitness:
    """Resultants i < j related by one renaming (and a shifting in priority mode)"""
    earlier: int
    later: int
    renaming: Renaming
    shifting: Optional[Shifting] = None
    variant: str = EVRL

    @property
    def indices(self):
        return self.earlier, self.later

    def __str__(self):
        text = f"({self.earlier},{self.later}) tau={self.renaming}"
        if self.shifting is not None:
            text += f" shifting={self.shifting}"
        return text


def _priority_mode(mode) -> bool:
    if isinstance(mode, DerivationMode):
        return not mode.is_list_mode
    return mode == 'priority'


def resultant_equivalent(earlier: Resultant, later: Resultant, mode='list', variant: str = EVRL,
                         indices=(0, 1)) -> Optional[PruneWitness]:
    """One renaming tau with G_j = G_i tau and N_j = N_i tau, or None"""
    if variant not in VARIANTS:
        raise RuleError(f"Unknown loop check '{variant}'")
    reduced_i, reduced_j = earlier.reduced.sequence(), later.reduced.sequence()
    if len(reduced_i) != len(reduced_j):
        return None
    if variant == EVRL:
        goal_i, goal_j = earlier.instantiated_goal.sequence(), later.instantiated_goal.sequence()
        if len(goal_i) != len(goal_j):
            return None
        renaming = variant_of(goal_i + reduced_i, goal_j + reduced_j)
    else:
        renaming = variant_of(reduced_i, reduced_j)
    if renaming is None:
        return None
    shifting = None
    if _priority_mode(mode):
        shifting = find_shifting(earlier.reduced.apply(renaming), later.reduced)
        if shifting is None:
            return None
    return PruneWitness(indices[0], indices[1], renaming, shifting, variant)


def find_witness(resultants: Sequence[Resultant], later: int, mode='list',
                 variant: str = EVRL) -> Optional[PruneWitness]:
    """First earlier resultant equivalent to resultant `later`"""
    for earlier in range(later):
        witness = resultant_equivalent(resultants[earlier], resultants[later], mode, variant,
                                       (earlier, later))
        if witness is not None:
            return witness
    return None


def check_prune(derivation: Union[DerivationRecord, Sequence[Resultant]], mode=None,
                variant: str = EVRL) -> Optional[PruneWitness]:
    """First witness in lexicographic (j, i) order over a derivation prefix"""
    if isinstance(derivation, DerivationRecord):
        resultants: List[Resultant] = derivation.resultants()
        mode = derivation.mode if mode is None else mode
    else:
        resultants = list(derivation)
        mode = 'list' if mode is None else mode
    for later in range(1, len(resultants)):
        witness = find_witness(resultants, later, mode, variant)
        if witness is not None:
            return witness
    return None


def verify_witness(witness: PruneWitness, resultants: Sequence[Resultant]) -> bool:
    """Re-check a witness by applying its renaming and shifting"""
    earlier, later = resultants[witness.earlier], resultants[witness.later]
    moved = earlier.reduced.apply(witness.renaming)
    if moved.sequence() != later.reduced.sequence():
        return False
    if witness.variant == EVRL:
        if earlier.instantiated_goal.apply(witness.renaming).sequence() != later.instantiated_goal.sequence():
            return False
    if witness.shifting is not None:
        try:
            return moved.shift(witness.shifting) == later.reduced
        except (ShiftingError, PriorityClash):
            return False
    return True
