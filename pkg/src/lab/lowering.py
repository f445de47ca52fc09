"""
Lowerings of derivation steps and congruence
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.errors import InvalidInstance, PriorityClash
from src.core.lineage import LineageTag, initial_tag
from src.core.priority import PriorityAtom, PriorityGoal, Shifting
from src.core.terms import Clause, Substitution
from src.engine.derivation import StepRecord, p_derivation_step
from src.engine.scheduling import PositioningPolicy, ReplayPlacementPolicy
from src.parsers.program_parser import parse_atom, parse_clause


@dataclass(frozen=True)
class Specialisation:
    """a lambda sigma | (K lambda sigma + X) built from a | K"""
    goal: PriorityGoal
    substitution: Substitution
    shifting: Shifting
    context: PriorityGoal


def specialise(goal: PriorityGoal, substitution: Substitution, shifting: Shifting,
               context: PriorityGoal = PriorityGoal()) -> Specialisation:
    """Instance of goal by substitution, re-prioritised by shifting and merged with context"""
    if not goal:
        raise InvalidInstance("Cannot specialise the empty goal")
    moved = goal.apply(substitution).shift(shifting)
    selected = moved.first()
    if context and context.min_priority() <= selected.priority:
        raise InvalidInstance(f"Context {context} is not scheduled after the selected atom {selected}")
    try:
        specialised = moved + context
    except PriorityClash as e:
        raise InvalidInstance(str(e))
    return Specialisation(specialised, substitution, shifting, context)


@dataclass
class LoweringInstance:
    """Step from a | K and the same clause applied to its specialisation a lambda sigma | (K lambda sigma + X)"""
    base: StepRecord
    specialised: StepRecord
    context: PriorityGoal
    substitution: Substitution = field(default_factory=Substitution)
    shifting: Optional[Shifting] = None

    def validate(self):
        if self.base.clause != self.specialised.clause:
            raise InvalidInstance(f"Steps apply different clauses {self.base.clause.label} "
                                  f"and {self.specialised.clause.label}")
        base_goal = self.base.goal
        moved = base_goal.apply(self.substitution)
        if self.shifting is not None:
            moved = moved.shift(self.shifting)
        context_tags = set(self.context.tags())
        restricted = PriorityGoal(pa for pa in self.specialised.goal if pa.tag not in context_tags)
        if restricted.sequence() != moved.sequence():
            raise InvalidInstance(f"{self.specialised.goal} is not a specialisation of {base_goal} "
                                  f"by {self.context}")
        if self.shifting is not None and restricted.priorities() != moved.priorities():
            raise InvalidInstance("Specialised priorities do not follow the shifting")
        if self.specialised.selected.tag != self.base.selected.tag:
            raise InvalidInstance("Specialised step rewrites a different atom")

    def old_ranks(self) -> Dict[LineageTag, int]:
        return {pa.tag: i for i, pa in enumerate(self.base.rest)}


def _interleaving(step: StepRecord, ranks: Dict[LineageTag, int]) -> Tuple[Tuple[str, int], ...]:
    """Priority order of old atoms (by rank) and new atoms (by body position); other atoms skipped"""
    new_rank = {pa.tag: m for m, pa in enumerate(step.new_atoms)}
    sequence = []
    for pa in step.resolvent:
        if pa.tag in new_rank:
            sequence.append(('new', new_rank[pa.tag]))
        elif pa.tag in ranks:
            sequence.append(('old', ranks[pa.tag]))
    return tuple(sequence)


def is_congruent_lowering(instance: LoweringInstance) -> bool:
    """New atoms interleave with the surviving old atoms the same way in both steps"""
    instance.validate()
    ranks = instance.old_ranks()
    return _interleaving(instance.base, ranks) == _interleaving(instance.specialised, ranks)


def congruence_by_enumeration(instance: LoweringInstance) -> bool:
    """Brute force: some increasing map from the base resolvent priorities into the specialised ones
    sends K to K sigma and every new atom to its counterpart"""
    instance.validate()
    base, specialised = instance.base, instance.specialised
    by_tag = {pa.tag: pa.priority for pa in specialised.resolvent}
    wanted: Dict[Fraction, Fraction] = {}
    for pa in base.rest:
        wanted[pa.priority] = by_tag[pa.tag]
    for old, new in zip(base.new_atoms, specialised.new_atoms):
        wanted[old.priority] = new.priority
    support = sorted(base.resolvent.priorities())
    for image in combinations(sorted(specialised.resolvent.priorities()), len(support)):
        if all(wanted[p] == q for p, q in zip(support, image)):
            return True
    return False


def make_lowering(clause: Clause, goal: PriorityGoal, policy: PositioningPolicy,
                  specialisation: Specialisation) -> Optional[LoweringInstance]:
    """Both steps of a lowering, or None when the clause does not apply to the specialisation"""
    base = p_derivation_step(goal, clause, policy)
    if base is None:
        return None
    avoid = goal.vars() | specialisation.goal.vars()
    lowered = p_derivation_step(specialisation.goal, clause, policy, avoid)
    if lowered is None:
        return None
    return LoweringInstance(base, lowered, specialisation.context, specialisation.substitution,
                            specialisation.shifting)


def _goal(items: Sequence[Tuple[str, str]], first_tag: int = 0) -> PriorityGoal:
    return PriorityGoal(PriorityAtom(parse_atom(text), Fraction(priority), initial_tag(first_tag + i))
                        for i, (text, priority) in enumerate(items))


def replayed_lowering(clause: Clause, base_items, base_new, specialised_items, specialised_new,
                      context_positions: Sequence[int]) -> LoweringInstance:
    """Lowering with explicitly given resolvent priorities; context_positions index specialised_items"""
    base_goal = _goal(base_items)
    rest_positions = [i for i in range(len(specialised_items)) if i not in context_positions]
    # the specialised atoms outside the context carry the tags of their base counterparts
    tags = {}
    for base_index, position in enumerate(rest_positions):
        tags[position] = initial_tag(base_index)
    for k, position in enumerate(context_positions):
        tags[position] = initial_tag(len(base_items) + k)
    specialised_goal = PriorityGoal(PriorityAtom(parse_atom(text), Fraction(priority), tags[i])
                                    for i, (text, priority) in enumerate(specialised_items))
    context = PriorityGoal(pa for pa in specialised_goal if pa.tag.position >= len(base_items))
    base = p_derivation_step(base_goal, clause, ReplayPlacementPolicy(base_new))
    lowered = p_derivation_step(specialised_goal, clause, ReplayPlacementPolicy(specialised_new))
    if base is None or lowered is None:
        raise InvalidInstance(f"Clause {clause.label} does not apply to the instance")
    base_priorities = sorted(base_goal.priorities())
    specialised_priorities = [pa.priority for pa in specialised_goal if pa.tag not in set(context.tags())]
    shifting = Shifting(dict(zip(base_priorities, specialised_priorities)))
    return LoweringInstance(base, lowered, context, Substitution(), shifting)


def congruent_example() -> LoweringInstance:
    """a[2]|{b[3]} gives {b[3], q[10]}; a[9]|{b[12], b[13], d[15]} gives q[12.5], context b[13], d[15]"""
    return replayed_lowering(parse_clause('a <- q.'), [('a', '2'), ('b', '3')], ['10'],
                             [('a', '9'), ('b', '12'), ('b', '13'), ('d', '15')], ['25/2'], [2, 3])


def incongruent_example() -> LoweringInstance:
    """Same steps as congruent_example with the context b[12], d[15] instead"""
    return replayed_lowering(parse_clause('a <- q.'), [('a', '2'), ('b', '3')], ['10'],
                             [('a', '9'), ('b', '12'), ('b', '13'), ('d', '15')], ['25/2'], [1, 3])


def center_lowering_instance(policy: PositioningPolicy) -> LoweringInstance:
    """s <- p(b) from s[1], p(a)[2] and from s[1], p(a)[3/2] with the context r[2]"""
    clause = parse_clause('c2: s <- p(b).')
    goal = _goal([('s', '1'), ('p(a)', '2')])
    shifting = Shifting({Fraction(1): Fraction(1), Fraction(2): Fraction(3, 2)})
    specialisation = specialise(goal, Substitution(), shifting, _goal([('r', '2')], first_tag=2))
    instance = make_lowering(clause, goal, policy, specialisation)
    if instance is None:
        raise InvalidInstance("Clause s <- p(b) does not apply")
    return instance


def pred_special_lowering_instance(policy: PositioningPolicy) -> LoweringInstance:
    """s(x,y) <- t(x,y) from s(x2,x1)[1] | q(x,x2)[2] and with the context r[3/2]"""
    clause = parse_clause('c2: s(x,y) <- t(x,y).')
    goal = _goal([('s(x2,x1)', '1'), ('q(x,x2)', '2')])
    shifting = Shifting.identity(goal.priorities())
    specialisation = specialise(goal, Substitution(), shifting, _goal([('r', '3/2')], first_tag=2))
    instance = make_lowering(clause, goal, policy, specialisation)
    if instance is None:
        raise InvalidInstance("Clause s(x,y) <- t(x,y) does not apply")
    return instance


def fixed_instances(policy: PositioningPolicy) -> List[Tuple[str, LoweringInstance]]:
    return [('center-lowering', center_lowering_instance(policy)),
            ('pred-special-lowering', pred_special_lowering_instance(policy))]


def instance_to_dict(instance: LoweringInstance) -> Dict[str, object]:
    return {
        'clause': str(instance.base.clause),
        'base_goal': str(instance.base.goal),
        'base_resolvent': str(instance.base.resolvent),
        'specialised_goal': str(instance.specialised.goal),
        'specialised_resolvent': str(instance.specialised.resolvent),
        'context': str(instance.context),
        'substitution': str(instance.substitution),
        'shifting': str(instance.shifting) if instance.shifting is not None else None,
    }