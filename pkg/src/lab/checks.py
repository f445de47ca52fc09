"""
Property checks
Randomised and exhaustive instance tests of the structural properties of scheduling rules
"""
import random
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from src.core.errors import (InvalidInstance, NoEmbedding, NoWitnessDerivation, OrderViolation,
                             PriorityClash)
from src.core.lineage import LineageTag, initial_tag
from src.core.priority import (PriorityAtom, PriorityGoal, Shifting, allocate_above, allocate_between,
                               concat, find_shifting, merge, p_variant_of)
from src.core.terms import Clause, Substitution, rename_apart, vars_of
from src.core.unify import is_sublist, match_sequence, mgu
from src.engine.derivation import (DerivationRecord, DeriveOptions, derive, is_a_preq, sub_resolvent,
                                   sub_template)
from src.engine.scheduling import (PositioningPolicy, is_stack_queue_policy, is_stack_queue_shaped,
                                   make_center_insert_rule, make_pred_special_rule, make_stack_queue_rule)
from src.engine.tree import build_tree
from src.lab import generators as gen
from src.lab.catalogue import get_example
from src.lab.lowering import (Specialisation, congruence_by_enumeration, fixed_instances, instance_to_dict,
                              is_congruent_lowering, make_lowering, specialise)
from src.lab.report import BUDGET, CheckReport, TrialResult, run_trials
from src.lab.search import (SearchState, enumerate_derivations, find_template_superlist,
                            random_derivation, replay_template, search_derivations, superlist_depth)
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('lab.checks')


def _trials(trials: Optional[int]) -> int:
    return config.get('check_trials', 1000) if trials is None else trials


def _seed(seed: Optional[int]) -> int:
    return config.default_seed() if seed is None else seed


def _workers(workers: Optional[int]) -> int:
    return config.get('workers', 1) if workers is None else workers


def _random_lowering(rng: random.Random, policy: PositioningPolicy, vocab: gen.Vocabulary,
                     max_context: int = 3):
    goal = gen.random_goal(rng, vocab)
    clause = gen.generalised_clause(rng, goal.first().atom, vocab, 'c1')
    substitution = gen.random_substitution(rng, vocab, goal.vars())
    shifting = gen.random_shifting(rng, goal.priorities())
    moved_first = shifting(goal.first().priority)
    moved = goal.shift(shifting)
    context = gen.random_context(rng, vocab, moved, rng.randint(0, max_context), after=moved_first)
    specialisation = specialise(goal, substitution, shifting, context)
    return make_lowering(clause, goal, policy, specialisation)


# Specialisation independence and congruence

def check_specialisation_independence(policy: PositioningPolicy, trials: Optional[int] = None,
                                      seed: Optional[int] = None, workers: Optional[int] = None,
                                      include_fixed: bool = True,
                                      vocab: gen.Vocabulary = gen.DEFAULT_VOCABULARY) -> CheckReport:
    """Every sampled lowering via policy is a congruent lowering"""
    seed = _seed(seed)

    def trial(rng: random.Random, index: int) -> TrialResult:
        instance = _random_lowering(rng, policy, vocab)
        if instance is None:
            return TrialResult.skip("clause does not apply to the specialisation")
        shaped = all(is_stack_queue_shaped(step.rest.apply(step.mgu), step.new_priorities)
                     for step in (instance.base, instance.specialised))
        counts = {'shape_violations': 0 if shaped else 1}
        if not is_congruent_lowering(instance):
            result = TrialResult.fail("lowering is not congruent", **instance_to_dict(instance))
            result.counts = counts
            return result
        return TrialResult.ok(**counts)

    report = run_trials(f"spec-independence[{policy}]", trial, _trials(trials), seed, _workers(workers))
    if include_fixed:
        for name, instance in fixed_instances(policy):
            if is_congruent_lowering(instance):
                report.add(-1, None, TrialResult.ok())
            else:
                report.add(-1, None, TrialResult.fail(f"{name}: lowering is not congruent",
                                                      **instance_to_dict(instance)))
    violations = report.details.get('shape_violations', 0)
    if not report.failures and violations:
        report.add(-1, None, TrialResult.fail(
            f"{violations} congruent steps are not split into stack part, old goal and queue part"))
    return report


def check_congruence_oracle(trials: Optional[int] = None, seed: Optional[int] = None,
                            policies: Sequence[PositioningPolicy] = (),
                            workers: Optional[int] = None) -> CheckReport:
    """The interleaving decision agrees with enumerating increasing maps"""
    policies = list(policies) or [make_stack_queue_rule(), make_center_insert_rule(),
                                  make_pred_special_rule('p')]

    def trial(rng: random.Random, index: int) -> TrialResult:
        policy = policies[index % len(policies)]
        instance = _random_lowering(rng, policy, gen.DEFAULT_VOCABULARY, max_context=2)
        if instance is None:
            return TrialResult.skip()
        decided = is_congruent_lowering(instance)
        enumerated = congruence_by_enumeration(instance)
        if decided != enumerated:
            return TrialResult.fail(f"interleaving says {decided}, enumeration says {enumerated}",
                                    **instance_to_dict(instance))
        return TrialResult.ok(congruent=int(decided))

    return run_trials('congruence-oracle', trial, _trials(trials), _seed(seed), _workers(workers))


# Lowering and lifting

def _relates_by_instance_and_shift(general: PriorityGoal, specific: PriorityGoal) -> bool:
    """specific = general sigma rho for some substitution sigma and shifting rho"""
    sigma = match_sequence(general.sequence(), specific.sequence())
    if sigma is None:
        return False
    return find_shifting(general.apply(sigma), specific) is not None


def lowering_trial(policy: PositioningPolicy, program, goal: PriorityGoal, specialisation: Specialisation,
                   template: Sequence[Clause], node_budget: Optional[int] = None) -> TrialResult:
    """One lowering instance: replay template from goal, then search the specialisation"""
    template = list(template)
    record = replay_template(program, goal, template, policy, 'psld')
    if len(record) != len(template):
        raise InvalidInstance(f"Template {[c.label for c in template]} does not apply to {goal}")
    final = record.final().resolvent
    context_tags = set(specialisation.context.tags())
    part = {pa.tag for pa in specialisation.goal if pa.tag not in context_tags}
    counterexample: Dict[str, object] = {}

    def applied(state: SearchState) -> List[Clause]:
        return [step.clause for step in state.steps if step.selected.tag.descends_from(part)]

    def accept(state: SearchState) -> bool:
        if applied(state) != template:
            return False
        restricted = PriorityGoal(pa for pa in state.goal if pa.tag.descends_from(part))
        if _relates_by_instance_and_shift(final, restricted):
            return True
        counterexample.setdefault('lowered_part', str(restricted))
        counterexample.setdefault('lowered_labels', state.labels())
        return False

    def prune(state: SearchState) -> bool:
        done = applied(state)
        return done != template[:len(done)]

    outcome = search_derivations(program, specialisation.goal, policy, superlist_depth(len(template)),
                                 accept, prune, node_budget=node_budget)
    instance = {'goal': str(goal), 'specialised': str(specialisation.goal),
                'template': [c.label for c in template], 'resolvent': str(final)}
    if outcome.found is not None:
        return TrialResult.ok()
    if counterexample:
        return TrialResult.fail("lowered sub-resolvent is no instance of a shifting of the resolvent",
                                **instance, **counterexample)
    if outcome.exhausted:
        return TrialResult.budget("search budget exhausted")
    raise NoWitnessDerivation(f"No derivation from {specialisation.goal} applies template "
                              f"{[c.label for c in template]} to the specialised part")


def check_lowering_lemma(policy: PositioningPolicy, program, goal: PriorityGoal, substitution,
                         shifting: Shifting, context: PriorityGoal, template: Sequence[Clause],
                         node_budget: Optional[int] = None) -> CheckReport:
    """Lowering of one derivation G -> Q to G gamma tau + X"""
    specialisation = specialise(goal, substitution, shifting, context)
    report = CheckReport(f"lowering[{policy}]")
    report.add(0, None, lowering_trial(policy, program, goal, specialisation, template, node_budget))
    return report


def lowering_trials(policy: PositioningPolicy, trials: Optional[int] = None, seed: Optional[int] = None,
                    workers: Optional[int] = None, max_steps: int = 3) -> CheckReport:
    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        goal = gen.random_goal(rng, vocab, rng.randint(1, 3))
        record = random_derivation(program, goal, policy, rng, rng.randint(0, max_steps))
        template = record.template
        substitution = gen.random_substitution(rng, vocab, goal.vars())
        shifting = gen.random_shifting(rng, goal.priorities())
        moved = goal.shift(shifting)
        context = gen.random_context(rng, vocab, moved, rng.randint(0, 2), after=moved.min_priority())
        specialisation = specialise(goal, substitution, shifting, context)
        return lowering_trial(policy, program, goal, specialisation, template, node_budget=20_000)

    return run_trials(f"lowering[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers),
                      missing_witness=BUDGET)


def lifting_trial(policy: PositioningPolicy, program, record: DerivationRecord, part: Iterable[LineageTag],
                  general: PriorityGoal) -> TrialResult:
    """Replay the sub-template of the specialised part from the general goal"""
    template = sub_template(record, part)
    lifted = replay_template(program, general, template, policy, 'psld')
    if len(lifted) != len(template):
        return TrialResult.fail(f"lifted template fails at step {len(lifted) + 1}",
                                general=str(general), template=[c.label for c in template],
                                specialised=str(record.initial_goal),
                                reached=str(lifted.final().resolvent))
    return TrialResult.ok()


def check_lifting_lemma(policy: PositioningPolicy, program, record: DerivationRecord,
                        part: Iterable[LineageTag], general: PriorityGoal) -> CheckReport:
    report = CheckReport(f"lifting[{policy}]")
    report.add(0, None, lifting_trial(policy, program, record, part, general))
    return report


def lifting_trials(policy: PositioningPolicy, trials: Optional[int] = None, seed: Optional[int] = None,
                   workers: Optional[int] = None, max_steps: int = 4) -> CheckReport:
    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        general = gen.random_goal(rng, vocab, rng.randint(1, 3))
        substitution = gen.random_substitution(rng, vocab, general.vars())
        shifting = gen.random_shifting(rng, general.priorities())
        moved = general.shift(shifting)
        context = gen.random_context(rng, vocab, moved, rng.randint(0, 2), after=moved.min_priority())
        specialisation = specialise(general, substitution, shifting, context)
        record = random_derivation(program, specialisation.goal, policy, rng, rng.randint(0, max_steps))
        context_tags = set(context.tags())
        part = [pa.tag for pa in specialisation.goal if pa.tag not in context_tags]
        return lifting_trial(policy, program, record, part, general)

    return run_trials(f"lifting[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


# Determinism

def check_determinism(policy: PositioningPolicy, trials: Optional[int] = None, seed: Optional[int] = None,
                      workers: Optional[int] = None, max_steps: int = 4) -> CheckReport:
    """Identical templates from p-variant goals end in p-variant resolvents; split runs compose"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        goal = gen.random_goal(rng, vocab)
        record = random_derivation(program, goal, policy, rng, rng.randint(0, max_steps))
        template = record.template
        final = record.final().resolvent
        renaming = gen.random_renaming(rng, goal.vars(), avoid=final.vars())
        variant = goal.apply(renaming).shift(gen.random_shifting(rng, goal.priorities()))
        replayed = replay_template(program, variant, template, policy, 'psld')
        instance = {'goal': str(goal), 'variant': str(variant), 'template': record.labels()}
        if len(replayed) != len(template):
            return TrialResult.fail("template does not replay from a p-variant", **instance)
        if p_variant_of(final, replayed.final().resolvent) is None:
            return TrialResult.fail("final resolvents are not p-variants", **instance,
                                    first=str(final), second=str(replayed.final().resolvent))
        # running the template in two pieces gives the same resolvent
        cut = rng.randint(0, len(template))
        middle = record.entries[cut].resolvent
        rest = replay_template(program, middle, template[cut:], policy, 'psld')
        if len(rest) != len(template) - cut or p_variant_of(final, rest.final().resolvent) is None:
            return TrialResult.fail(f"combining at step {cut} differs from the direct run", **instance)
        return TrialResult.ok(steps=len(template))

    return run_trials(f"determinism[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


# Duplication

def duplicate_block(goal: PriorityGoal, start: int, end: int, after: int) -> PriorityGoal:
    """A|B|C|B pi|D where B = goal[start:end] and the copy follows goal[after]"""
    atoms = goal.atoms
    if not 0 <= start < end <= len(atoms) or not end - 1 <= after < len(atoms):
        raise InvalidInstance(f"Bad duplication block [{start}:{end}] after {after} of {goal}")
    low = atoms[after].priority
    high = atoms[after + 1].priority if after + 1 < len(atoms) else None
    block = atoms[start:end]
    priorities = allocate_between(low, high, len(block))
    copies = [PriorityAtom(pa.atom, p, initial_tag(len(atoms) + i))
              for i, (pa, p) in enumerate(zip(block, priorities))]
    return goal + PriorityGoal(copies)


def full_duplicate(goal: PriorityGoal, indices: Sequence[int],
                   rng: Optional[random.Random] = None) -> PriorityGoal:
    """N + F where every atom of F copies an atom of N with a smaller priority"""
    atoms = goal.atoms
    current = goal
    for i, index in enumerate(indices):
        original = atoms[index]
        if rng is None:
            priority = allocate_above(current.max_priority(), 1)[0]
        else:
            priority = gen.random_interleaving(rng, current.priorities(), 1, after=original.priority)[0]
        copy = PriorityAtom(original.atom, priority, initial_tag(len(atoms) + i))
        current = current + PriorityGoal([copy])
    return current


def _duplication_report(name: str, policy, program, goal: PriorityGoal, duplicated: PriorityGoal,
                        depth: int, node_budget: Optional[int]) -> CheckReport:
    report = CheckReport(name)
    report.details['stack_queue'] = is_stack_queue_policy(policy)
    for index, (steps, resolvent) in enumerate(enumerate_derivations(program, goal, policy, depth,
                                                                     node_budget=node_budget)):
        labels = [step.clause.label for step in steps]
        outcome = find_template_superlist(program, duplicated, policy, labels, len(resolvent),
                                          node_budget=node_budget)
        if outcome.found is not None:
            report.add(index, None, TrialResult.ok())
        elif outcome.exhausted:
            report.add(index, None, TrialResult.budget())
        else:
            report.add(index, None, TrialResult.fail(
                "no derivation of the duplicated goal contains the template",
                goal=str(goal), duplicated=str(duplicated), template=labels, length=len(resolvent)))
    return report


def check_duplication(policy: PositioningPolicy, program, goal: PriorityGoal, block: Tuple[int, int],
                      position: int, depth: int = 5, node_budget: Optional[int] = None) -> CheckReport:
    """Every derivation from A|B|C|D has a counterpart from A|B|C|B pi|D with a superlist template"""
    duplicated = duplicate_block(goal, block[0], block[1], position)
    return _duplication_report(f"duplication[{policy}]", policy, program, goal, duplicated, depth, node_budget)


def check_full_duplication(policy: PositioningPolicy, program, goal: PriorityGoal, indices: Sequence[int],
                           depth: int = 5, node_budget: Optional[int] = None,
                           rng: Optional[random.Random] = None) -> CheckReport:
    duplicated = full_duplicate(goal, indices, rng)
    return _duplication_report(f"full-duplication[{policy}]", policy, program, goal, duplicated, depth,
                               node_budget)


def duplication_trials(policy: PositioningPolicy, trials: Optional[int] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None, depth: int = 4, full: bool = False) -> CheckReport:
    """Exhaustive duplication checks on random ground programs"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.GROUND_VOCABULARY
        program = gen.random_program(rng, vocab, size=3, filler=False)
        goal = gen.random_goal(rng, vocab, 4)
        if full:
            indices = rng.sample(range(len(goal)), rng.randint(1, 2))
            report = check_full_duplication(policy, program, goal, indices, depth, 50_000, rng)
        else:
            start = rng.randrange(len(goal))
            end = rng.randint(start + 1, len(goal))
            after = rng.randint(end - 1, len(goal) - 1)
            report = check_duplication(policy, program, goal, (start, end), after, depth, 50_000)
        if report.failures:
            failure = report.failures[0]
            return TrialResult.fail(failure.message, program=str(program), **failure.instance)
        if report.budget_exhausted:
            return TrialResult.budget()
        return TrialResult.ok(derivations=report.trials)

    name = 'full-duplication' if full else 'duplication'
    return run_trials(f"{name}[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


# Embedding

def _keyed(atoms: Iterable[PriorityAtom]) -> List[Tuple[Tuple[int, int], object]]:
    return [(pa.tag.key, pa.atom) for pa in atoms]


def _replay_without_reduction(record: DerivationRecord) -> Optional[str]:
    """Repeat the steps of record on the unreduced goals; None when every N_j is a sublist of G'_j"""
    current: List[PriorityAtom] = list(record.initial_goal)
    for entry in record.entries:
        if not is_sublist(_keyed(entry.reduced), _keyed(current)):
            return f"reduced resolvent {entry.index} is not a sublist of the unreduced one"
        step = entry.step
        if step is None:
            break
        keys = [pa.tag.key for pa in current]
        selected_key = step.selected.tag.key
        if selected_key not in keys or current[keys.index(selected_key)].atom != step.selected.atom:
            return f"selected atom of step {step.index} is missing from the unreduced goal"
        clash = vars_of(step.renamed) & vars_of([pa.atom for pa in current])
        if clash:
            return f"step {step.index} is not standardised apart from the unreduced goal"
        result = [pa.apply(step.mgu) for pa in current if pa.tag.key != selected_key]
        new_keys = {pa.tag.key for pa in step.new_atoms}
        position = -1
        for pa in step.resolvent:
            if pa.tag.key in new_keys:
                result.insert(position + 1, pa)
                position += 1
            else:
                position = [q.tag.key for q in result].index(pa.tag.key)
        current = result
    return None


def find_priority_embedding(program, record: DerivationRecord, policy: Optional[PositioningPolicy] = None,
                            depth: Optional[int] = None, node_budget: Optional[int] = None) -> SearchState:
    """p-SLD derivation Z from the same goal with the template of record as a sublist and a last
    resolvent at least as long"""
    policy = policy or record.rule
    outcome = find_template_superlist(program, record.initial_goal, policy, record.labels(),
                                      len(record.final().reduced), depth, 'psld', node_budget)
    if outcome.found is not None:
        return outcome.found
    if outcome.exhausted:
        raise NoEmbedding(f"Search budget exhausted before an embedding of {len(record)} steps was found")
    raise NoEmbedding(f"No p-SLD derivation of {record.initial_goal} contains template {record.labels()}")


def check_embedding(program, record: DerivationRecord, policy: Optional[PositioningPolicy] = None,
                    depth: Optional[int] = None, node_budget: Optional[int] = None) -> CheckReport:
    """Embedding of a (p-)RSLD derivation into one without reduction"""
    report = CheckReport(f"embedding[{record.rule_name}]")
    constructive = record.mode.is_list_mode or not record.options.advancement
    if constructive:
        problem = _replay_without_reduction(record)
        report.details['method'] = 'replay'
        if problem is None:
            report.add(0, None, TrialResult.ok(steps=len(record)))
        else:
            report.add(0, None, TrialResult.fail(problem, goal=str(record.initial_goal),
                                                 template=record.labels()))
        return report
    report.details['method'] = 'search'
    found = find_priority_embedding(program, record, policy, depth, node_budget)
    report.details['embedding'] = found.labels()
    report.add(0, None, TrialResult.ok(steps=len(record)))
    return report


def embedding_trials(policy, programs: Sequence, trials: Optional[int] = None, seed: Optional[int] = None,
                     workers: Optional[int] = None, max_steps: int = 6, mode: str = 'prsld') -> CheckReport:
    """Random reduced derivations over the given (program, goal) pairs"""
    programs = list(programs)

    def trial(rng: random.Random, index: int) -> TrialResult:
        program, goal = programs[index % len(programs)]
        record = random_derivation(program, goal, policy, rng, rng.randint(0, max_steps), mode)
        try:
            report = check_embedding(program, record, policy, node_budget=100_000)
        except NoEmbedding as e:
            return TrialResult.fail(str(e), goal=str(goal), template=record.labels())
        return TrialResult.ok() if report.passed else TrialResult.fail(report.failures[0].message)

    return run_trials(f"embedding[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


# Supplementary properties

def check_step_lifting(trials: Optional[int] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None) -> CheckReport:
    """A clause applying to an instance of an atom applies to the atom, renamed apart from any fixed set"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        goal = gen.random_goal(rng, vocab)
        atom = goal.first().atom
        clause = gen.random_clause(rng, vocab, 'c1', atom.predicate)
        gamma = gen.random_substitution(rng, vocab, goal.vars())
        instance = gamma.apply_atom(atom)
        renamed, _ = rename_apart(clause, vars_of(instance))
        if mgu(instance, renamed.head) is None:
            return TrialResult.skip()
        fixed = {f"v{rng.randint(1, 9)}" for _ in range(3)} | set(rng.sample(vocab.variables, 2))
        avoid = fixed | goal.vars() | vars_of(instance)
        lifted, _ = rename_apart(clause, avoid)
        if vars_of(lifted) & avoid:
            return TrialResult.fail("renamed clause meets the fixed variables", clause=str(clause))
        if mgu(atom, lifted.head) is None:
            return TrialResult.fail("clause does not apply to the general atom", atom=str(atom),
                                    instance=str(instance), clause=str(clause))
        return TrialResult.ok()

    return run_trials('step-lifting', trial, _trials(trials), _seed(seed), _workers(workers))


def check_instance_relation(policy: PositioningPolicy, trials: Optional[int] = None,
                            seed: Optional[int] = None, workers: Optional[int] = None) -> CheckReport:
    """The lowered resolvent is an instance of the base resolvent, by a renaming when the specialising
    substitution is one"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        goal = gen.random_goal(rng, vocab)
        clause = gen.generalised_clause(rng, goal.first().atom, vocab, 'c1')
        renaming_only = rng.random() < 0.5
        if renaming_only:
            substitution = gen.random_renaming(rng, goal.vars())
        else:
            substitution = gen.random_substitution(rng, vocab, goal.vars())
        shifting = gen.random_shifting(rng, goal.priorities())
        moved = goal.shift(shifting)
        context = gen.random_context(rng, vocab, moved, rng.randint(0, 2), after=moved.min_priority())
        instance = make_lowering(clause, goal, policy, specialise(goal, substitution, shifting, context))
        if instance is None:
            return TrialResult.skip()
        base, lowered = instance.base, instance.specialised
        by_tag = {pa.tag: pa.atom for pa in lowered.resolvent}
        base_atoms = [pa.atom for pa in base.rest.apply(base.mgu)] + [pa.atom for pa in base.new_atoms]
        lowered_atoms = [by_tag[pa.tag] for pa in base.rest] + [pa.atom for pa in lowered.new_atoms]
        delta = match_sequence(base_atoms, lowered_atoms)
        if delta is None:
            return TrialResult.fail("lowered resolvent is not an instance", **instance_to_dict(instance))
        if renaming_only and not delta.is_renaming():
            return TrialResult.fail(f"renaming specialisation gives the non renaming {delta}",
                                    **instance_to_dict(instance))
        return TrialResult.ok()

    return run_trials(f"instance-relation[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


def check_instance_replay(policy: PositioningPolicy, trials: Optional[int] = None,
                          seed: Optional[int] = None, workers: Optional[int] = None,
                          max_steps: int = 4) -> CheckReport:
    """A template replays from G theta phi where theta is its own computed substitution"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        goal = gen.random_goal(rng, vocab)
        record = random_derivation(program, goal, policy, rng, rng.randint(0, max_steps))
        instantiated = record.initial_goal.apply(record.accumulated)
        phi = gen.random_substitution(rng, vocab, instantiated.vars())
        target = instantiated.apply(phi)
        replayed = replay_template(program, target, record.template, policy, 'psld')
        if len(replayed) != len(record):
            return TrialResult.fail(f"template stops after {len(replayed)} of {len(record)} steps",
                                    goal=str(goal), instance=str(target), template=record.labels())
        return TrialResult.ok()

    return run_trials(f"instance-replay[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


def _preq_prefix(record: DerivationRecord, tags: Set[LineageTag]) -> int:
    count = 0
    for step in record.steps:
        if not step.selected.tag.stack_descends_from(tags):
            break
        count += 1
    return count


def _contiguous(goal: PriorityGoal, tags: Set[LineageTag]) -> bool:
    positions = [i for i, pa in enumerate(goal) if pa.tag.descends_from(tags)]
    return not positions or positions == list(range(positions[0], positions[-1] + 1))


def check_preq_determinism(policy: PositioningPolicy, trials: Optional[int] = None,
                           seed: Optional[int] = None, workers: Optional[int] = None,
                           max_steps: int = 4) -> CheckReport:
    """A-preq derivations replay from a renamed, shifted A followed by an unrelated tail"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        size = rng.randint(1, 3)
        goal = gen.random_goal(rng, vocab, size + rng.randint(0, 2))
        part = {pa.tag for pa in goal.atoms[:size]}
        record = random_derivation(program, goal, policy, rng, rng.randint(0, max_steps))
        template = record.template[:_preq_prefix(record, part)]
        if not template:
            return TrialResult.skip()
        head = PriorityGoal(goal.atoms[:size])
        renamed = head.apply(gen.random_renaming(rng, head.vars(), avoid=record.final().resolvent.vars()))
        renamed = renamed.shift(gen.random_shifting(rng, head.priorities()))
        tail = gen.random_goal(rng, vocab, rng.randint(0, 2), first_tag=size)
        if tail:
            offset = renamed.max_priority() + 1 - tail.min_priority()
            tail = PriorityGoal(pa.with_priority(pa.priority + offset) for pa in tail)
        other = concat(renamed, tail)
        replayed = replay_template(program, other, template, policy, 'psld')
        instance = {'goal': str(goal), 'other': str(other), 'template': [c.label for c in template]}
        if len(replayed) != len(template):
            return TrialResult.fail("pre-queued template does not replay", **instance)
        if not is_a_preq(replayed, part):
            return TrialResult.fail("replayed derivation is not pre-queued", **instance)
        first = sub_resolvent(record, part, 0, len(template))
        second = sub_resolvent(replayed, part)
        if p_variant_of(first, second) is None:
            return TrialResult.fail("sub-resolvents are not p-variants", **instance,
                                    first=str(first), second=str(second))
        tail_tags = {pa.tag for pa in tail}
        if not _contiguous(replayed.final().resolvent, tail_tags):
            return TrialResult.fail("the tail is split by new atoms", **instance)
        return TrialResult.ok()

    return run_trials(f"preq-determinism[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


def check_termination_preservation(program, goal, rule, depth: int, list_mode: bool = False) -> CheckReport:
    """A finite tree without reduction stays finite, within the same depth, with reduction"""
    plain, reduced = ('sld', 'rsld') if list_mode else ('psld', 'prsld')
    report = CheckReport(f"termination[{rule}]")
    without = build_tree(program, goal, plain, rule, depth)
    report.details['plain'] = without.summary()
    if not without.is_finite():
        report.add(0, None, TrialResult.skip(f"{plain} tree is not finite within depth {depth}"))
        return report
    options = DeriveOptions.from_config(advancement=True)
    with_reduction = build_tree(program, goal, reduced, rule, depth, options=options)
    report.details['reduced'] = with_reduction.summary()
    if with_reduction.is_finite():
        report.add(0, None, TrialResult.ok())
    else:
        report.add(0, None, TrialResult.fail(f"{reduced} tree does not halt within {depth} steps",
                                             goal=str(goal), rule=str(rule)))
    return report


def termination_trials(policy: PositioningPolicy, trials: Optional[int] = None, seed: Optional[int] = None,
                       workers: Optional[int] = None, depth: int = 8) -> CheckReport:
    def trial(rng: random.Random, index: int) -> TrialResult:
        vocab = gen.DEFAULT_VOCABULARY
        program = gen.random_program(rng, vocab)
        goal = gen.random_goal(rng, vocab, rng.randint(1, 3))
        report = check_termination_preservation(program, goal, policy, depth)
        if report.failures:
            return TrialResult.fail(report.failures[0].message, program=str(program), goal=str(goal))
        if report.skipped:
            return TrialResult.skip()
        return TrialResult.ok()

    return run_trials(f"termination[{policy}]", trial, _trials(trials), _seed(seed), _workers(workers))


def check_priority_axioms(trials: Optional[int] = None, seed: Optional[int] = None,
                          workers: Optional[int] = None) -> CheckReport:
    """Shifting distributes over merge and concatenation; merge is a commutative monoid"""

    def trial(rng: random.Random, index: int) -> TrialResult:
        goal = gen.random_goal(rng, gen.DEFAULT_VOCABULARY, rng.randint(1, 6))
        atoms = list(goal.atoms)
        parts_count = rng.randint(1, min(3, len(atoms)))
        # scattered parts for merge, consecutive blocks for concatenation
        scattered: List[List[PriorityAtom]] = [[] for _ in range(parts_count)]
        for pa in atoms:
            scattered[rng.randrange(parts_count)].append(pa)
        merged_parts = [PriorityGoal(part) for part in scattered]
        cuts = sorted(rng.sample(range(1, len(atoms)), parts_count - 1)) if parts_count > 1 else []
        bounds = [0] + cuts + [len(atoms)]
        blocks = [PriorityGoal(atoms[a:b]) for a, b in zip(bounds, bounds[1:])]
        pi = gen.random_shifting(rng, goal.priorities())

        total = PriorityGoal()
        for part in merged_parts:
            total = merge(total, part)
        if total != goal:
            return TrialResult.fail("merging the parts does not give the goal back", goal=str(goal))
        shifted = PriorityGoal()
        for part in merged_parts:
            shifted = shifted + part.shift(pi)
        if goal.shift(pi) != shifted:
            return TrialResult.fail("shifting does not distribute over merge", goal=str(goal), pi=str(pi))
        chained = PriorityGoal()
        for block in blocks:
            chained = chained | block.shift(pi)
        if goal.shift(pi) != chained:
            return TrialResult.fail("shifting does not distribute over concatenation", goal=str(goal))
        # independent shiftings of consecutive blocks are related by one shifting
        targets = gen.random_priorities(rng, len(atoms))
        first = PriorityGoal()
        second = PriorityGoal()
        for (a, b), block in zip(zip(bounds, bounds[1:]), blocks):
            first = first | block.shift(Shifting(dict(zip(block.priorities(), targets[a:b]))))
            second = second | block
        if find_shifting(first, second) is None:
            return TrialResult.fail("blockwise shiftings are not related by a shifting", goal=str(goal))
        for part in merged_parts:
            if part.shift(pi) != PriorityGoal(pa for pa in goal.shift(pi) if pa.tag in set(part.tags())):
                return TrialResult.fail("shifting of a merge does not determine its parts", goal=str(goal))
        if len(merged_parts) > 1:
            a, b = merged_parts[0], merged_parts[1]
            if a + b != b + a:
                return TrialResult.fail("merge is not commutative", goal=str(goal))
        if goal + PriorityGoal() != goal:
            return TrialResult.fail("the empty goal is not neutral", goal=str(goal))
        if len(blocks) > 1:
            try:
                concat(blocks[1], blocks[0])
                return TrialResult.fail("concatenation accepted goals out of order", goal=str(goal))
            except OrderViolation:
                pass
        try:
            goal + goal
            return TrialResult.fail("merge accepted clashing priorities", goal=str(goal))
        except PriorityClash:
            pass
        return TrialResult.ok()

    return run_trials('priority-axioms', trial, _trials(trials), _seed(seed), _workers(workers))


# Fixed instances from the worked examples

def fixed_lowering_check(policy: PositioningPolicy, node_budget: Optional[int] = None) -> CheckReport:
    """s[1], p(a)[2] against s[1], p(a)[3/2], r[2] with the template c2, c1"""
    example = get_example('centre-lowering')
    program = example.program()
    goal = example.goal()
    specialised = example.goal('specialised')
    kept = [pa.priority for pa in specialised if pa.atom.predicate != 'r']
    shifting = Shifting(dict(zip(goal.priorities(), kept)))
    context = PriorityGoal(PriorityAtom(pa.atom, pa.priority, initial_tag(len(goal)))
                           for pa in specialised if pa.atom.predicate == 'r')
    template = [program.clause('c2'), program.clause('c1')]
    return check_lowering_lemma(policy, program, goal, Substitution(), shifting, context, template, node_budget)


def fixed_lifting_check(policy: PositioningPolicy) -> CheckReport:
    """Four steps from p[1.1], r[1.5], r[1.6], s[2], s[2.5] lifted to p[1], s[2], s[3]"""
    example = get_example('centre-lifting')
    program = example.program()
    options = DeriveOptions.from_config(max_steps=4, loop_check='off')
    record = derive(program, example.goal(), 'psld', policy, options)
    initial = record.initial_goal
    part = [initial[0].tag, initial[3].tag, initial[4].tag]
    return check_lifting_lemma(policy, program, record, part, example.goal('general'))
