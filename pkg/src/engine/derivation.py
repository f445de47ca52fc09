"""
Derivation steps and the single-branch derivation driver
Covers SLD, RSLD, p-SLD and p-RSLD with lineage tracking and resultants
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Set, Tuple, Union

from src.core.errors import (DerivationIndexError, EmptyGoal, ReductionError, RuleError,
                             StandardisationError, UnknownTag)
from src.core.lineage import INNER, QUEUE, STACK, LineageTag, initial_tag, step_tag
from src.core.priority import PriorityAtom, PriorityGoal
from src.core.terms import Atom, Clause, FreshNames, Renaming, Substitution, rename_apart, vars_of
from src.core.unify import mgu
from src.engine.reduction import (GREEDY, ReductionCertificate, reduce_priority_goal,
                                  verify_reduction)
from src.engine.scheduling import ListSelectionRule, PositioningPolicy, select_atom
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('engine.derivation')


class DerivationMode(Enum):
    SLD = 'sld'
    RSLD = 'rsld'
    PSLD = 'psld'
    PRSLD = 'prsld'

    @property
    def is_list_mode(self) -> bool:
        return self in (DerivationMode.SLD, DerivationMode.RSLD)

    @property
    def reduces(self) -> bool:
        return self in (DerivationMode.RSLD, DerivationMode.PRSLD)


class DerivationStatus(Enum):
    REFUTED = 'refuted'
    FAILED = 'failed'
    BOUND_EXCEEDED = 'bound_exceeded'
    PRUNED = 'pruned'


@dataclass
class DeriveOptions:
    """Knobs of a derivation run"""
    max_steps: int = 1000
    reduce: Optional[bool] = None  # None: reduce exactly in rsld and prsld
    reduction: str = GREEDY
    advancement: bool = True
    loop_check: str = 'off'
    occurs_check: bool = True
    verify_reductions: bool = True

    @classmethod
    def from_config(cls, **overrides) -> 'DeriveOptions':
        options = cls(max_steps=config.get('max_steps', 1000),
                      occurs_check=config.get('occurs_check', True),
                      verify_reductions=config.get('verify_reductions', True))
        for key, value in overrides.items():
            if value is not None:
                setattr(options, key, value)
        return options


@dataclass(frozen=True)
class StepRecord:
    """One resolution step from a (reduced) resolvent"""
    index: int
    selected: PriorityAtom
    selected_position: int
    clause: Clause
    renamed: Clause
    renaming: Renaming
    mgu: Substitution
    rest: PriorityGoal
    new_atoms: Tuple[PriorityAtom, ...]
    resolvent: PriorityGoal

    @property
    def new_priorities(self) -> Tuple[Fraction, ...]:
        return tuple(pa.priority for pa in self.new_atoms)

    @property
    def goal(self) -> PriorityGoal:
        return PriorityGoal(self.rest.atoms + (self.selected,))


@dataclass(frozen=True)
class Resultant:
    """Pair [N_h, G0 theta_0 ... theta_(h-1)]"""
    reduced: PriorityGoal
    instantiated_goal: PriorityGoal

    def __str__(self):
        return f"[{self.reduced}; {self.instantiated_goal}]"


@dataclass
class DerivationEntry:
    """Resolvent G_j, its reduction N_j and the step leaving N_j"""
    index: int
    resolvent: PriorityGoal
    reduced: PriorityGoal
    certificate: Optional[ReductionCertificate]
    instantiated_goal: PriorityGoal
    step: Optional[StepRecord] = None

    @property
    def resultant(self) -> Resultant:
        return Resultant(self.reduced, self.instantiated_goal)


@dataclass
class DerivationRecord:
    """A derivation prefix with its outcome"""
    initial_goal: PriorityGoal
    mode: DerivationMode
    rule_name: str
    options: DeriveOptions
    entries: List[DerivationEntry] = field(default_factory=list)
    status: Optional[DerivationStatus] = None
    witness: Optional[object] = None
    accumulated: Substitution = field(default_factory=Substitution)
    rule: Optional[object] = None

    @property
    def steps(self) -> List[StepRecord]:
        return [entry.step for entry in self.entries if entry.step is not None]

    @property
    def template(self) -> List[Clause]:
        return [step.clause for step in self.steps]

    def labels(self) -> List[str]:
        return [clause.label for clause in self.template]

    def __len__(self) -> int:
        return len(self.steps)

    def final(self) -> DerivationEntry:
        return self.entries[-1]

    def resultants(self) -> List[Resultant]:
        return [entry.resultant for entry in self.entries]

    def resultant_at(self, index: int) -> Resultant:
        return resultant_at(self, index)

    def reduced_lengths(self) -> List[int]:
        return [len(entry.reduced) for entry in self.entries]


def tag_initial_goal(goal: Union[PriorityGoal, Sequence[Atom]]) -> PriorityGoal:
    """Initial goal with every atom carrying its initial position tag"""
    if not isinstance(goal, PriorityGoal):
        return PriorityGoal.from_atoms(list(goal))
    if all(pa.tag is not None for pa in goal):
        return goal
    return PriorityGoal(PriorityAtom(pa.atom, pa.priority, pa.tag or initial_tag(i))
                        for i, pa in enumerate(goal))


def _resolve(selected: PriorityAtom, clause: Clause, avoid: Set[str], fresh: Optional[FreshNames],
             occurs_check: bool) -> Optional[Tuple[Clause, Renaming, Substitution]]:
    if selected.atom.signature != clause.head.signature:
        return None
    if fresh is None:
        fresh = FreshNames(avoid)
    renamed, renaming = rename_apart(clause, avoid, fresh)
    clash = vars_of(renamed) & avoid
    if clash:
        raise StandardisationError(f"Renamed clause {renamed} shares variables {sorted(clash)}")
    theta = mgu(selected.atom, renamed.head, occurs_check)
    if theta is None:
        return None
    return renamed, renaming, theta


def _placement_mode(priority: Fraction, rest: PriorityGoal, selected: PriorityAtom) -> str:
    if rest:
        if priority < rest.min_priority():
            return STACK
        if priority > rest.max_priority():
            return QUEUE
        return INNER
    return STACK if priority < selected.priority else QUEUE


def p_derivation_step(goal: PriorityGoal, clause: Clause, policy: PositioningPolicy,
                      avoid: Iterable[str] = (), fresh: Optional[FreshNames] = None,
                      index: int = 0, occurs_check: bool = True) -> Optional[StepRecord]:
    """Priority derivation step on the atom of minimum priority, or None when mgu fails"""
    selected = select_atom(goal)
    avoid = set(avoid) | goal.vars()
    resolved = _resolve(selected, clause, avoid, fresh, occurs_check)
    if resolved is None:
        return None
    renamed, renaming, theta = resolved
    rest = goal.without(selected)
    body = [theta.apply_atom(atom) for atom in renamed.body]
    priorities = policy.place(rest.apply(theta), selected, body, renamed)
    if len(priorities) != len(body) or set(priorities) & set(rest.priorities()):
        raise RuleError(f"Policy {policy} produced invalid priorities {priorities}")
    new_atoms = tuple(
        PriorityAtom(atom, priority,
                     step_tag(index, m, _placement_mode(priority, rest, selected), selected.tag))
        for m, (atom, priority) in enumerate(zip(body, priorities)))
    resolvent = PriorityGoal(rest.apply(theta).atoms + new_atoms)
    return StepRecord(index, selected, 0, clause, renamed, renaming, theta, rest, new_atoms, resolvent)


def list_derivation_step(goal: Union[PriorityGoal, Sequence[Atom]], rule: ListSelectionRule,
                         clause: Clause, avoid: Iterable[str] = (), fresh: Optional[FreshNames] = None,
                         index: int = 0, occurs_check: bool = True) -> Optional[StepRecord]:
    """Classical SLD step replacing the selected atom in place; positions renumbered 1..k"""
    if not isinstance(goal, PriorityGoal):
        goal = PriorityGoal.from_atoms(list(goal))
    if not goal:
        raise EmptyGoal("Cannot select an atom from the empty goal")
    atoms = list(goal.atoms)
    position = rule(goal.sequence())
    selected = atoms[position]
    avoid = set(avoid) | goal.vars()
    resolved = _resolve(selected, clause, avoid, fresh, occurs_check)
    if resolved is None:
        return None
    renamed, renaming, theta = resolved
    rest = goal.without(selected)
    if position == 0:
        mode = STACK
    elif position == len(atoms) - 1:
        mode = QUEUE
    else:
        mode = INNER
    new_atoms = [PriorityAtom(theta.apply_atom(atom), Fraction(0), step_tag(index, m, mode, selected.tag))
                 for m, atom in enumerate(renamed.body)]
    before = [pa.apply(theta) for pa in atoms[:position]]
    after = [pa.apply(theta) for pa in atoms[position + 1:]]
    ordered = before + new_atoms + after
    renumbered = [pa.with_priority(Fraction(i + 1)) for i, pa in enumerate(ordered)]
    placed = tuple(renumbered[len(before):len(before) + len(new_atoms)])
    return StepRecord(index, selected, position, clause, renamed, renaming, theta, rest, placed,
                      PriorityGoal(renumbered))


ClauseChooser = Callable[[List[StepRecord]], Optional[StepRecord]]


def _first_applicable(candidates: List[StepRecord]) -> Optional[StepRecord]:
    return candidates[0] if candidates else None


def _reduce(goal: PriorityGoal, protected: Set[str], mode: DerivationMode,
            options: DeriveOptions) -> Tuple[PriorityGoal, ReductionCertificate]:
    advancement = options.advancement and not mode.is_list_mode
    reduced, certificate = reduce_priority_goal(goal, protected, advancement, options.reduction)
    if options.verify_reductions and not verify_reduction(goal, reduced, certificate, protected):
        raise ReductionError(f"Reduction of {goal} failed verification")
    return reduced, certificate


def derive(program, goal, mode='sld', rule=None, options: Optional[DeriveOptions] = None,
           chooser: Optional[ClauseChooser] = None) -> DerivationRecord:
    """Single-branch derivation with program-order clause choice unless a chooser is given"""
    from src.engine.loop_check import find_witness

    mode = DerivationMode(mode)
    options = options or DeriveOptions.from_config()
    chooser = chooser or _first_applicable
    clauses = list(program)
    if rule is None:
        raise RuleError("A derivation needs a selection rule or positioning policy")
    if mode.is_list_mode != isinstance(rule, ListSelectionRule):
        raise RuleError(f"Rule {rule} does not fit mode {mode.value}")
    reduces = mode.reduces if options.reduce is None else options.reduce

    initial = tag_initial_goal(goal)
    fresh = FreshNames(initial.vars())
    used = set(initial.vars())
    theta = Substitution()
    current = initial
    record = DerivationRecord(initial, mode, str(rule), options, rule=rule)
    index = 0
    while True:
        instantiated = initial.apply(theta)
        protected = instantiated.vars()
        if reduces:
            reduced, certificate = _reduce(current, protected, mode, options)
        else:
            reduced, certificate = current, None
        entry = DerivationEntry(index, current, reduced, certificate, instantiated)
        record.entries.append(entry)

        if options.loop_check != 'off' and index > 0:
            witness = find_witness(record.resultants(), index, mode, options.loop_check)
            if witness is not None:
                record.status, record.witness = DerivationStatus.PRUNED, witness
                logger.info("Derivation pruned: resultant %d repeats resultant %d",
                            witness.later, witness.earlier)
                break
        if not reduced:
            record.status = DerivationStatus.REFUTED
            break
        if index >= options.max_steps:
            record.status = DerivationStatus.BOUND_EXCEEDED
            break

        candidates: List[StepRecord] = []
        forks = {}
        for clause in clauses:
            avoid = used | reduced.vars()
            branch = fresh.fork()
            if mode.is_list_mode:
                step = list_derivation_step(reduced, rule, clause, avoid, branch, index, options.occurs_check)
            else:
                step = p_derivation_step(reduced, clause, rule, avoid, branch, index, options.occurs_check)
            if step is not None:
                candidates.append(step)
                forks[id(step)] = branch
                if chooser is _first_applicable:
                    break
        step = chooser(candidates)
        if step is None:
            record.status = DerivationStatus.FAILED
            break
        fresh = forks[id(step)]
        used |= vars_of(step.renamed)
        entry.step = step
        theta = theta.compose(step.mgu)
        logger.debug("Step %d: %s with %s -> %s", index, step.selected, step.clause.label, step.resolvent)
        current = step.resolvent
        index += 1
    record.accumulated = theta
    return record


def resultant_at(record: DerivationRecord, index: int) -> Resultant:
    if not 0 <= index < len(record.entries):
        raise DerivationIndexError(f"Derivation has no resolvent {index} (length {len(record)})")
    return record.entries[index].resultant


def _check_tags(record: DerivationRecord, tags: Set[LineageTag], start: int):
    if not 0 <= start < len(record.entries):
        raise DerivationIndexError(f"Derivation has no resolvent {start}")
    entry = record.entries[start]
    present = set(entry.resolvent.tags()) | set(entry.reduced.tags())
    missing = [tag for tag in tags if tag not in present]
    if missing:
        raise UnknownTag(f"Tags {', '.join(map(str, missing))} do not occur in resolvent {start}")


def sub_template(record: DerivationRecord, tags: Iterable[LineageTag], start: int = 0) -> List[Clause]:
    """Clauses applied from resolvent start on to atoms of F or their descendants"""
    tags = set(tags)
    _check_tags(record, tags, start)
    return [step.clause for step in record.steps[start:] if step.selected.tag.descends_from(tags)]


def sub_resolvent(record: DerivationRecord, tags: Iterable[LineageTag], start: int = 0,
                  end: Optional[int] = None) -> PriorityGoal:
    """Atoms of reduced resolvent end that descend from F"""
    tags = set(tags)
    _check_tags(record, tags, start)
    end = len(record.entries) - 1 if end is None else end
    if not start <= end < len(record.entries):
        raise DerivationIndexError(f"Derivation has no resolvent {end}")
    return PriorityGoal(pa for pa in record.entries[end].reduced if pa.tag.descends_from(tags))


def is_a_preq(record: DerivationRecord, tags: Iterable[LineageTag], start: int = 0,
              end: Optional[int] = None) -> bool:
    """Every rewritten atom is in A or reaches A through stack placements only"""
    tags = set(tags)
    _check_tags(record, tags, start)
    end = len(record.steps) if end is None else end
    return all(step.selected.tag.stack_descends_from(tags) for step in record.steps[start:end])


def is_a_queued(record: DerivationRecord, tags: Iterable[LineageTag], start: int = 0,
                end: Optional[int] = None) -> bool:
    """A-preq and the stacked part of A is exhausted in the last resolvent"""
    tags = set(tags)
    if not is_a_preq(record, tags, start, end):
        return False
    end = len(record.steps) if end is None else end
    last = record.entries[end].reduced
    return not any(pa.tag.stack_descends_from(tags) for pa in last)


def origin_interleaving(step: StepRecord) -> Tuple[Tuple[str, int], ...]:
    """Resolvent read in priority order as ('old', rank in K) and ('new', body position)"""
    old_rank = {pa.tag: i for i, pa in enumerate(step.rest)}
    new_rank = {pa.tag: m for m, pa in enumerate(step.new_atoms)}
    sequence = []
    for pa in step.resolvent:
        if pa.tag in new_rank:
            sequence.append(('new', new_rank[pa.tag]))
        elif pa.tag in old_rank:
            sequence.append(('old', old_rank[pa.tag]))
    return tuple(sequence)
