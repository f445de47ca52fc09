"""
Goal reduction
Removal of redundant atoms from lists and p-goals, with certificates and their verification
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from src.core.errors import PriorityClash
from src.core.priority import PriorityGoal
from src.core.terms import Atom, Substitution, Term, vars_of
from src.core.unify import match_atom
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('engine.reduction')

GREEDY = 'greedy'
EXHAUSTIVE = 'exhaustive'
IDENTITY = 'identity'


@dataclass(frozen=True)
class ReductionCertificate:
    """Witness of a reduction: tau, kept indices and eliminated sets"""
    tau: Substitution
    kept: Tuple[int, ...]
    eliminated: Mapping[int, Tuple[int, ...]] = field(default_factory=dict)
    advancement: Mapping[int, Fraction] = field(default_factory=dict)
    advanced: bool = False

    @property
    def is_identity(self) -> bool:
        return not self.eliminated

    def eliminated_indices(self) -> List[int]:
        return sorted(i for group in self.eliminated.values() for i in group)

    def eliminator_of(self, index: int) -> Optional[int]:
        for keeper, group in self.eliminated.items():
            if index in group:
                return keeper
        return None


def identity_certificate(size: int) -> ReductionCertificate:
    return ReductionCertificate(Substitution(), tuple(range(size)))


def _vars_by_index(atoms: Sequence[Atom]) -> List[Set[str]]:
    return [vars_of(atom) for atom in atoms]


def _bound(bindings: Dict[str, Term]) -> Set[str]:
    return {name for name, term in bindings.items() if getattr(term, 'name', None) != name}


class _GoalIndex:
    """Atoms of one goal indexed by signature and by the variables they contain"""

    def __init__(self, atoms: Sequence[Atom]):
        self.atoms = atoms
        self.vars = _vars_by_index(atoms)
        self.by_signature: Dict[Tuple[str, int], List[int]] = {}
        self.occurrences: Dict[str, List[int]] = {}
        for index, atom in enumerate(atoms):
            self.by_signature.setdefault(atom.signature, []).append(index)
            for name in self.vars[index]:
                self.occurrences.setdefault(name, []).append(index)

    def targets(self, index: int, live: Set[int]) -> Iterator[int]:
        """Live atoms other than index that share its signature, in goal order"""
        for target in self.by_signature[self.atoms[index].signature]:
            if target != index and target in live:
                yield target

    def containing(self, names: Iterable[str], live: Set[int]) -> Set[int]:
        return {i for name in names for i in self.occurrences.get(name, ()) if i in live}

    def stuck(self, protected: Set[str]) -> Tuple[Set[int], Set[str]]:
        """Atoms no reduction can eliminate, and the variables they fix

        An atom with no image under the fixed variables always stays in N, so its variables
        become fixed too; the least fixpoint of this is computed with a worklist.
        """
        everything = set(range(len(self.atoms)))
        fixed = set(protected)
        stuck: Set[int] = set()
        queue = deque(everything)
        queued = set(everything)
        while queue:
            index = queue.popleft()
            queued.discard(index)
            if any(match_atom(self.atoms[index], self.atoms[target], {}, fixed) is not None
                   for target in self.targets(index, everything)):
                continue
            stuck.add(index)
            fresh = self.vars[index] - fixed
            fixed |= fresh
            for other in self.containing(fresh, everything):
                if other not in stuck and other not in queued:
                    queue.append(other)
                    queued.add(other)
        return stuck, fixed


def _close_matcher(index: _GoalIndex, live: Set[int], bindings: Dict[str, Term],
                   assigned: Dict[int, int], fixed: Set[str]) -> Optional[Tuple[Dict[str, Term], Dict[int, int]]]:
    """Extend a matcher until every atom it touches maps onto an untouched atom"""
    touched = index.containing(_bound(bindings), live) | set(assigned)
    if any(target in touched for target in assigned.values()):
        return None
    pending = sorted(touched - set(assigned))
    if not pending:
        return bindings, assigned
    current = pending[0]
    for target in index.targets(current, live):
        if target in touched:
            continue
        extended = match_atom(index.atoms[current], index.atoms[target], bindings, fixed)
        if extended is None:
            continue
        result = _close_matcher(index, live, extended, {**assigned, current: target}, fixed)
        if result is not None:
            return result
    return None


def _final_eliminators(owner: Dict[int, int], alive: Set[int]) -> Dict[int, Tuple[int, ...]]:
    groups: Dict[int, List[int]] = {}
    for index in owner:
        keeper = owner[index]
        while keeper not in alive:
            keeper = owner[keeper]
        groups.setdefault(keeper, []).append(index)
    return {keeper: tuple(sorted(group)) for keeper, group in sorted(groups.items())}


def _greedy(atoms: Sequence[Atom], protected: Set[str]) -> ReductionCertificate:
    index = _GoalIndex(atoms)
    stuck, fixed = index.stuck(protected)
    alive = list(range(len(atoms)))
    tau = Substitution()
    owner: Dict[int, int] = {}
    progress = True
    while progress:
        progress = False
        live = set(alive)
        # latest candidate first
        for candidate in reversed(alive):
            if candidate in stuck:
                continue
            for target in index.targets(candidate, live):
                start = match_atom(atoms[candidate], atoms[target], {}, fixed)
                if start is None:
                    continue
                closed = _close_matcher(index, live, start, {candidate: target}, fixed)
                if closed is None:
                    continue
                bindings, assigned = closed
                trial_alive = [i for i in alive if i not in assigned]
                trial_owner = {**owner, **assigned}
                trial_tau = tau.compose(Substitution(bindings))
                certificate = ReductionCertificate(
                    trial_tau, tuple(trial_alive), _final_eliminators(trial_owner, set(trial_alive)))
                if not _verify_list(atoms, certificate, protected):
                    continue
                alive, owner, tau = trial_alive, trial_owner, trial_tau
                progress = True
                break
            if progress:
                break
    return ReductionCertificate(tau, tuple(alive), _final_eliminators(owner, set(alive)))


def _cover(atoms: Sequence[Atom], kept: Tuple[int, ...],
           protected: Set[str]) -> Optional[Tuple[Dict[str, Term], Dict[int, int]]]:
    """Map every dropped atom into kept atoms with one substitution fixing their variables"""
    fixed = set(protected)
    for index in kept:
        fixed |= vars_of(atoms[index])
    dropped = [i for i in range(len(atoms)) if i not in kept]

    def search(position: int, bindings: Dict[str, Term], assigned: Dict[int, int]):
        if position == len(dropped):
            return bindings, assigned
        index = dropped[position]
        for target in kept:
            extended = match_atom(atoms[index], atoms[target], bindings, fixed)
            if extended is None:
                continue
            found = search(position + 1, extended, {**assigned, index: target})
            if found is not None:
                return found
        return None

    return search(0, {}, {})


def _exhaustive(atoms: Sequence[Atom], protected: Set[str]) -> ReductionCertificate:
    size = len(atoms)
    for keep in range(1 if size else 0, size + 1):
        for kept in combinations(range(size), keep):
            found = _cover(atoms, kept, protected)
            if found is None:
                continue
            bindings, assigned = found
            groups: Dict[int, List[int]] = {}
            for index, target in assigned.items():
                groups.setdefault(target, []).append(index)
            return ReductionCertificate(Substitution(bindings), kept,
                                        {k: tuple(sorted(v)) for k, v in sorted(groups.items())})
    return identity_certificate(size)


def _reduce_atoms(atoms: Sequence[Atom], protected: Iterable[str], mode: str) -> ReductionCertificate:
    protected = set(protected)
    if mode == IDENTITY or len(atoms) < 2:
        return identity_certificate(len(atoms))
    if mode == EXHAUSTIVE:
        limit = config.get('exhaustive_limit', 12)
        if len(atoms) <= limit:
            return _exhaustive(atoms, protected)
        logger.warning("Goal of length %d exceeds the exhaustive limit %d, using greedy reduction",
                       len(atoms), limit)
    return _greedy(atoms, protected)


def reduce_list_goal(goal: Sequence[Atom], protected: Iterable[str] = (),
                     mode: str = GREEDY) -> Tuple[Tuple[Atom, ...], ReductionCertificate]:
    """Reduced goal N of G by tau up to the protected variables X"""
    atoms = tuple(goal)
    certificate = _reduce_atoms(atoms, protected, mode)
    reduced = tuple(atoms[i] for i in certificate.kept)
    if not certificate.is_identity:
        logger.debug("Reduced %d atoms to %d with tau=%s", len(atoms), len(reduced), certificate.tau)
    return reduced, certificate


def reduce_priority_goal(goal: PriorityGoal, protected: Iterable[str] = (), advancement: bool = True,
                         mode: str = GREEDY) -> Tuple[PriorityGoal, ReductionCertificate]:
    """Reduced p-goal; eliminating atoms advance to the least priority of what they eliminate"""
    atoms = goal.atoms
    base = _reduce_atoms(goal.sequence(), protected, mode)
    moves: Dict[int, Fraction] = {}
    if advancement:
        for keeper, group in base.eliminated.items():
            lowest = min([atoms[keeper].priority] + [atoms[i].priority for i in group])
            if lowest != atoms[keeper].priority:
                moves[keeper] = lowest
    certificate = ReductionCertificate(base.tau, base.kept, base.eliminated, moves, advancement)
    reduced = PriorityGoal(atoms[i].with_priority(moves.get(i, atoms[i].priority)) for i in base.kept)
    if not certificate.is_identity:
        logger.debug("Reduced %s to %s with tau=%s", goal, reduced, certificate.tau)
    return reduced, certificate


def _verify_list(atoms: Sequence[Atom], certificate: ReductionCertificate,
                 protected: Set[str]) -> bool:
    kept = list(certificate.kept)
    if any(not 0 <= i < len(atoms) for i in kept) or kept != sorted(set(kept)):
        return False
    tau = certificate.tau
    covered: List[int] = []
    for keeper, group in certificate.eliminated.items():
        if keeper not in kept:
            return False
        for index in group:
            if index in kept or not 0 <= index < len(atoms):
                return False
            if tau.apply_atom(atoms[index]) != atoms[keeper]:
                return False
            covered.append(index)
    dropped = [i for i in range(len(atoms)) if i not in kept]
    if sorted(covered) != dropped:
        return False
    fixed = set(protected)
    for index in kept:
        fixed |= vars_of(atoms[index])
    return not (fixed & tau.domain())


def verify_reduction(goal: Union[Sequence[Atom], PriorityGoal], reduced: Union[Sequence[Atom], PriorityGoal],
                     certificate: ReductionCertificate, protected: Iterable[str] = ()) -> bool:
    """Check every defining condition of a reduction against its certificate"""
    protected = set(protected)
    if isinstance(goal, PriorityGoal):
        atoms = goal.atoms
        if not _verify_list(goal.sequence(), certificate, protected):
            return False
        expected = []
        for index in certificate.kept:
            priority = atoms[index].priority
            if certificate.advanced and index in certificate.eliminated:
                group = certificate.eliminated[index]
                priority = min([priority] + [atoms[i].priority for i in group])
            expected.append(atoms[index].with_priority(priority))
        try:
            return PriorityGoal(expected) == reduced
        except PriorityClash:
            return False
    atoms = tuple(goal)
    if tuple(reduced) != tuple(atoms[i] for i in certificate.kept if 0 <= i < len(atoms)):
        return False
    return _verify_list(atoms, certificate, protected)
