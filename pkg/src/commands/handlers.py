"""
Command handlers for the rsld command line
Each handler takes the parsed arguments and returns the process exit code
"""
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.core.errors import InvalidInstance, NoEmbedding, RuleError
from src.core.lineage import initial_tag
from src.core.priority import PriorityAtom, PriorityGoal, Shifting, parse_priority
from src.core.terms import Substitution
from src.engine.derivation import DerivationStatus, DeriveOptions, derive
from src.engine.reduction import EXHAUSTIVE, GREEDY, reduce_list_goal, reduce_priority_goal
from src.engine.scheduling import rule_from_name
from src.engine.tree import build_tree
from src.lab import checks
from src.lab.catalogue import get_example, sample_programs
from src.lab.finiteness import check_loop_check_finiteness, check_resultant_equivalence
from src.lab.report import FAILED, INCONCLUSIVE, CheckReport, TrialResult
from src.parsers.program_parser import ProgramFile, load_program, parse_atom_list, parse_goal, parse_term
from src.tools.trace_export import record_to_json, record_to_text, report_to_json, tree_to_dot, tree_to_text
from src.utils.config import config
from src.utils.log import get_logger
from src.viewers import highlight_text

logger = get_logger('commands')

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BOUND = 2
EXIT_PRUNED = 3
EXIT_CHECK_FAILED = 4
EXIT_USAGE = 64

STATUS_EXIT_CODES = {
    DerivationStatus.REFUTED: EXIT_OK,
    DerivationStatus.FAILED: EXIT_FAILED,
    DerivationStatus.BOUND_EXCEEDED: EXIT_BOUND,
    DerivationStatus.PRUNED: EXIT_PRUNED,
}

LIST_MODES = ('sld', 'rsld')


def _emit(text: str, language: str, color: Optional[str]):
    print(highlight_text(text, language, color))


def _load_program_and_goal(args) -> Tuple[ProgramFile, PriorityGoal]:
    """--example fills in program and goal; explicit --program / --goal win"""
    example = get_example(args.example) if getattr(args, 'example', None) else None
    if args.program:
        program = load_program(args.program)
        if config.add_recent_program(Path(args.program).resolve()):
            config.save_config()
    elif example is not None:
        program = example.program()
    else:
        raise RuleError("A program is needed: use --program FILE or --example NAME")
    if args.goal:
        goal = parse_goal(args.goal, program.arities())
    elif example is not None:
        goal = example.goal()
    else:
        raise RuleError("A goal is needed: use --goal")
    return program, goal


def _mode_and_rule(args, default_mode: str = 'sld'):
    example = get_example(args.example) if getattr(args, 'example', None) else None
    mode = args.mode or (example.mode if example else default_mode)
    list_mode = mode in LIST_MODES
    name = args.rule or (example.rule_name if example else None)
    if name is None:
        name = config.get('list_rule' if list_mode else 'priority_rule')
    return mode, rule_from_name(name, list_mode)


def _warn_function_symbols(program: ProgramFile, loop_check: str):
    if loop_check != 'off' and program.has_function_symbols():
        logger.warning("Program has function symbols; the loop check may never fire")


def cmd_run(args) -> int:
    program, goal = _load_program_and_goal(args)
    mode, rule = _mode_and_rule(args)
    options = DeriveOptions.from_config(
        max_steps=args.max_steps,
        reduce=True if args.reduce else None,
        reduction=EXHAUSTIVE if args.exhaustive else GREEDY,
        advancement=False if args.no_advancement else None,
        loop_check=args.loop_check,
    )
    _warn_function_symbols(program, options.loop_check)
    record = derive(program, goal, mode, rule, options)
    trace = args.trace or config.get('trace_format', 'text')
    if trace == 'json':
        print(record_to_json(record))
    else:
        _emit(record_to_text(record), 'trace', args.color)
    return STATUS_EXIT_CODES[record.status]


def cmd_tree(args) -> int:
    program, goal = _load_program_and_goal(args)
    mode, rule = _mode_and_rule(args)
    _warn_function_symbols(program, args.loop_check)
    options = DeriveOptions.from_config(advancement=False if args.no_advancement else None)
    tree = build_tree(program, goal, mode, rule, args.depth, args.loop_check, options, args.budget)
    if args.dot:
        Path(args.dot).write_text(tree_to_dot(tree))
        logger.info("DOT written to %s", args.dot)
    _emit(tree_to_text(tree), 'trace', args.color)
    return EXIT_OK if tree.is_finite() else EXIT_BOUND


def cmd_reduce(args) -> int:
    protected = {name.strip() for name in (args.protect or '').split(',') if name.strip()}
    mode = EXHAUSTIVE if args.exhaustive else GREEDY
    if '[' in args.goal:
        goal = parse_goal(args.goal)
        reduced, certificate = reduce_priority_goal(goal, protected, not args.no_advancement, mode)
        text = str(reduced) if reduced else '[]'
        eliminated = [str(goal[i]) for i in certificate.eliminated_indices()]
    else:
        atoms = parse_atom_list(args.goal)
        reduced, certificate = reduce_list_goal(atoms, protected, mode)
        text = ', '.join(str(atom) for atom in reduced) or '[]'
        eliminated = [str(atoms[i]) for i in certificate.eliminated_indices()]
    _emit(text, 'lp', args.color)
    print(f"% tau = {certificate.tau}")
    if eliminated:
        print(f"% eliminated: {', '.join(eliminated)}")
    return EXIT_OK


# check

def _load_instance(path: Optional[str]) -> Dict[str, Any]:
    if not path:
        return {}
    try:
        with open(path, 'r', encoding='utf-8') as f:
            instance = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInstance(f"Cannot read instance file {path}: {e}")
    if not isinstance(instance, dict):
        raise InvalidInstance("An instance file holds one JSON object")
    instance['_dir'] = str(Path(path).resolve().parent)
    return instance


def _instance_program(instance: Dict[str, Any], args) -> ProgramFile:
    if args.program:
        return load_program(args.program)
    if 'program' in instance:
        return load_program(Path(instance['_dir']) / instance['program'])
    if 'example' in instance:
        return get_example(instance['example']).program()
    raise InvalidInstance("Instance names no program")


def _instance_goal(instance: Dict[str, Any], program: ProgramFile, args) -> PriorityGoal:
    text = args.goal or instance.get('goal')
    if text is None:
        if 'example' in instance:
            return get_example(instance['example']).goal()
        raise InvalidInstance("Instance names no goal")
    return parse_goal(text, program.arities())


def _instance_substitution(instance: Dict[str, Any]) -> Substitution:
    return Substitution({name: parse_term(text) for name, text in instance.get('substitution', {}).items()})


def _instance_shifting(instance: Dict[str, Any], goal: PriorityGoal) -> Shifting:
    mapping = instance.get('shifting')
    if mapping is None:
        return Shifting.identity(goal.priorities())
    return Shifting({parse_priority(k): parse_priority(v) for k, v in mapping.items()})


def _instance_context(instance: Dict[str, Any], goal: PriorityGoal) -> PriorityGoal:
    text = instance.get('context')
    if not text:
        return PriorityGoal()
    parsed = parse_goal(text)
    return PriorityGoal(PriorityAtom(pa.atom, pa.priority, initial_tag(len(goal) + i))
                        for i, pa in enumerate(parsed))


def _instance_template(instance: Dict[str, Any], program: ProgramFile):
    try:
        return [program.clause(label) for label in instance.get('template', [])]
    except KeyError as e:
        raise InvalidInstance(f"Template names unknown clause {e}")


def _check_lowering(policy, instance, args) -> List[CheckReport]:
    if instance:
        program = _instance_program(instance, args)
        goal = _instance_goal(instance, program, args)
        return [checks.check_lowering_lemma(policy, program, goal, _instance_substitution(instance),
                                            _instance_shifting(instance, goal), _instance_context(instance, goal),
                                            _instance_template(instance, program), args.budget)]
    return [checks.fixed_lowering_check(policy, args.budget),
            checks.lowering_trials(policy, args.trials, args.seed, args.workers)]


def _check_lifting(policy, instance, args) -> List[CheckReport]:
    if instance:
        program = _instance_program(instance, args)
        goal = _instance_goal(instance, program, args)
        general = parse_goal(instance['general'], program.arities())
        options = DeriveOptions.from_config(max_steps=instance.get('max_steps', 4), loop_check='off')
        record = derive(program, goal, 'psld', policy, options)
        part = [record.initial_goal[i].tag for i in instance.get('part', range(len(goal)))]
        return [checks.check_lifting_lemma(policy, program, record, part, general)]
    return [checks.fixed_lifting_check(policy),
            checks.lifting_trials(policy, args.trials, args.seed, args.workers)]


def _check_duplication(policy, instance, args, full: bool) -> List[CheckReport]:
    if not instance:
        return [checks.duplication_trials(policy, args.trials, args.seed, args.workers, full=full)]
    program = _instance_program(instance, args)
    goal = _instance_goal(instance, program, args)
    depth = instance.get('depth', 5)
    if full:
        return [checks.check_full_duplication(policy, program, goal, instance['indices'], depth, args.budget)]
    start, end = instance['block']
    return [checks.check_duplication(policy, program, goal, (start, end), instance['position'], depth,
                                     args.budget)]


def _check_embedding(policy, instance, args) -> List[CheckReport]:
    if not instance:
        pairs = [(example.program(), example.goal()) for example in sample_programs()]
        return [checks.embedding_trials(policy, pairs, args.trials, args.seed, args.workers)]
    program = _instance_program(instance, args)
    goal = _instance_goal(instance, program, args)
    mode = instance.get('mode', 'prsld')
    rule = rule_from_name(instance['rule'], mode in LIST_MODES) if 'rule' in instance else policy
    options = DeriveOptions.from_config(max_steps=instance.get('max_steps', 5),
                                        advancement=instance.get('advancement'))
    record = derive(program, goal, mode, rule, options)
    return [checks.check_embedding(program, record, None if mode in LIST_MODES else policy,
                                   node_budget=args.budget)]


def _check_termination(policy, instance, args) -> List[CheckReport]:
    depth = instance.get('depth', 12) if instance else 12
    if instance:
        program = _instance_program(instance, args)
        goal = _instance_goal(instance, program, args)
        return [checks.check_termination_preservation(program, goal, policy, depth)]
    return [checks.check_termination_preservation(example.program(), example.goal(), policy, depth)
            for example in sample_programs()]


def _check_finiteness(policy, instance, args) -> List[CheckReport]:
    return [check_loop_check_finiteness(args.trials, args.seed, args.workers),
            check_resultant_equivalence(args.trials, args.seed, args.workers)]


CheckRunner = Callable[[Any, Dict[str, Any], Any], List[CheckReport]]

CHECKS: Dict[str, CheckRunner] = {
    'spec-independence': lambda policy, instance, args: [
        checks.check_specialisation_independence(policy, args.trials, args.seed, args.workers)],
    'lowering': _check_lowering,
    'lifting': _check_lifting,
    'determinism': lambda policy, instance, args: [
        checks.check_determinism(policy, args.trials, args.seed, args.workers)],
    'duplication': lambda policy, instance, args: _check_duplication(policy, instance, args, False),
    'full-duplication': lambda policy, instance, args: _check_duplication(policy, instance, args, True),
    'embedding': _check_embedding,
    'step-lifting': lambda policy, instance, args: [
        checks.check_step_lifting(args.trials, args.seed, args.workers)],
    'instance-relation': lambda policy, instance, args: [
        checks.check_instance_relation(policy, args.trials, args.seed, args.workers)],
    'instance-replay': lambda policy, instance, args: [
        checks.check_instance_replay(policy, args.trials, args.seed, args.workers)],
    'preq-determinism': lambda policy, instance, args: [
        checks.check_preq_determinism(policy, args.trials, args.seed, args.workers)],
    'termination': _check_termination,
    'congruence-oracle': lambda policy, instance, args: [
        checks.check_congruence_oracle(args.trials, args.seed, workers=args.workers)],
    'priority-axioms': lambda policy, instance, args: [
        checks.check_priority_axioms(args.trials, args.seed, args.workers)],
    'finiteness': _check_finiteness,
}


def _print_report(report: CheckReport, color: Optional[str]):
    print(str(report))
    for failure in report.failures[:5]:
        print(f"  trial {failure.trial} (seed {failure.seed}): {failure.message}")
        for key, value in failure.instance.items():
            _emit(f"    {key}: {value}", 'trace', color)
    if len(report.failures) > 5:
        print(f"  ... {len(report.failures) - 5} more failures")


def cmd_check(args) -> int:
    policy = rule_from_name(args.rule or config.get('priority_rule', 'stack'), False)
    instance = _load_instance(args.instance)
    if args.seed is None:
        args.seed = config.default_seed()
    try:
        reports = CHECKS[args.name](policy, instance, args)
    except NoEmbedding as e:
        report = CheckReport(f"embedding[{policy}]")
        report.add(0, args.seed, TrialResult.fail(str(e)))
        reports = [report]
    if args.json:
        print(report_to_json(reports))
    else:
        for report in reports:
            _print_report(report, args.color)
    verdicts = {report.verdict for report in reports}
    if FAILED in verdicts:
        return EXIT_CHECK_FAILED
    if INCONCLUSIVE in verdicts:
        return EXIT_BOUND
    return EXIT_OK
