#!/usr/bin/env python3
"""
Tests for the property lab: trial runner, duplication, embedding, termination and sampled checks
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from src.core.errors import InvalidInstance, NoEmbedding, NoWitnessDerivation
from src.core.unify import is_sublist
from src.engine.derivation import DeriveOptions, derive
from src.engine.scheduling import OddEvenSelection, policy_from_name
from src.lab import checks
from src.lab.catalogue import get_example, sample_programs
from src.lab.checks import (check_congruence_oracle, check_determinism, check_duplication, check_embedding,
                            check_full_duplication, check_instance_relation, check_instance_replay,
                            check_preq_determinism, check_priority_axioms, check_specialisation_independence,
                            check_step_lifting, check_termination_preservation, duplicate_block,
                            duplication_trials, embedding_trials, find_priority_embedding, full_duplicate,
                            lifting_trials, lowering_trials)
from src.lab.report import (BUDGET, FAILED, INCONCLUSIVE, PASSED, CheckReport, TrialResult, replay_trial,
                            run_trials)
from src.parsers.program_parser import parse_goal


def _coin(rng, index):
    return TrialResult.ok(heads=int(rng.random() < 0.5))


def test_verdicts():
    """Test failed beats inconclusive, and budget-only runs are inconclusive"""
    report = CheckReport('demo')
    report.add(0, 1, TrialResult.ok())
    assert report.verdict == PASSED
    budget_only = CheckReport('demo')
    budget_only.add(0, 1, TrialResult.budget())
    assert budget_only.verdict == INCONCLUSIVE
    budget_only.add(1, 1, TrialResult.fail('broken', goal='p'))
    assert budget_only.verdict == FAILED
    assert budget_only.to_dict()['failures'][0]['instance'] == {'goal': 'p'}


def test_run_trials_is_reproducible():
    """Test the same seed gives the same report with one or several workers"""
    first = run_trials('coin', _coin, 40, seed=7)
    second = run_trials('coin', _coin, 40, seed=7, workers=4)
    assert first.to_dict() == second.to_dict()
    assert first.trials == 40


def test_replay_trial():
    """Test a single trial replays from its seed and index"""
    assert replay_trial(_coin, 7, 3) == replay_trial(_coin, 7, 3)


def _no_witness(rng, index):
    raise NoWitnessDerivation('nothing to compare')


def test_missing_witness_is_skipped():
    """Test a trial without a witness derivation counts as skipped by default"""
    report = run_trials('none', _no_witness, 3)
    assert report.skipped == 3
    assert report.passed


def test_missing_witness_as_budget():
    """Test trials without a witness can count against the search budget instead"""
    report = run_trials('none', _no_witness, 3, missing_witness=BUDGET)
    assert report.budget_exhausted == 3
    assert report.skipped == 0
    assert report.verdict == INCONCLUSIVE
    assert replay_trial(_no_witness, 0, 1, missing_witness=BUDGET).status == BUDGET


def test_lowering_without_witnesses_is_inconclusive(monkeypatch):
    """Test a lowering run where no trial finds a witness derivation does not pass"""

    def no_witness(*args, **kwargs):
        raise NoWitnessDerivation('no derivation applies the template')

    monkeypatch.setattr(checks, 'lowering_trial', no_witness)
    report = lowering_trials(policy_from_name('stack'), trials=5, seed=2, workers=1)
    assert report.budget_exhausted == 5
    assert report.verdict == INCONCLUSIVE


def test_duplicate_block():
    """Test the copy of B follows the atom at position after"""
    goal = parse_goal('p, q, r, s')
    duplicated = duplicate_block(goal, 1, 2, 3)
    assert [str(atom) for atom in duplicated.sequence()] == ['p', 'q', 'r', 's', 'q']
    assert duplicated.priorities() == (1, 2, 3, 4, 5)
    inside = duplicate_block(goal, 0, 2, 2)
    assert [str(atom) for atom in inside.sequence()] == ['p', 'q', 'r', 'p', 'q', 's']
    with pytest.raises(InvalidInstance):
        duplicate_block(goal, 2, 1, 3)
    with pytest.raises(InvalidInstance):
        duplicate_block(goal, 1, 3, 1)


def test_full_duplicate():
    """Test every copy is scheduled after its original"""
    goal = parse_goal('p, q')
    duplicated = full_duplicate(goal, [0, 1])
    assert [str(pa) for pa in duplicated] == ['p[1]', 'q[2]', 'p[3]', 'q[4]']


def test_duplication_on_ground_program():
    """Test the stack rule keeps every template after duplicating q"""
    example = get_example('duplication')
    report = check_duplication(policy_from_name('stack'), example.program(), example.goal(), (1, 2), 3)
    assert report.passed
    assert report.trials > 0
    assert report.details['stack_queue'] is True


def test_embedding_by_replay():
    """Test a reduced list derivation replays on the unreduced goals"""
    example = get_example('odd-even-loop')
    record = derive(example.program(), example.goal(), 'rsld', OddEvenSelection(),
                    DeriveOptions.from_config(max_steps=3))
    report = check_embedding(example.program(), record)
    assert report.details['method'] == 'replay'
    assert report.passed


def test_embedding_by_search():
    """Test a reduction with advancement is embedded by searching p-SLD derivations"""
    example = get_example('duplication')
    record = example.run('prsld')
    report = check_embedding(example.program(), record)
    assert report.details['method'] == 'search'
    assert report.details['embedding'][:3] == ['c1', 'c2', 'c3']
    assert report.passed


@pytest.mark.parametrize('name', ['duplication', 'advancement'])
def test_termination_preserved(name):
    """Test finite p-SLD trees stay finite with reduction"""
    example = get_example(name)
    report = check_termination_preservation(example.program(), example.goal(), policy_from_name('stack'), 10)
    assert report.passed
    assert report.skipped == 0


def test_termination_skips_infinite_trees():
    """Test an infinite plain tree gives no verdict on reduction"""
    example = get_example('loop')
    report = check_termination_preservation(example.program(), example.goal(), example.rule(), 4,
                                            list_mode=True)
    assert report.skipped == 1


def test_stack_rule_is_specialisation_independent():
    """Test sampled lowerings under the stack rule are congruent"""
    report = check_specialisation_independence(policy_from_name('stack'), trials=30, seed=3)
    assert report.passed, report.failures


@pytest.mark.parametrize('name', ['center', 'pred-special:s'])
def test_other_rules_fail_on_fixed_instances(name):
    """Test the fixed lowerings refute specialisation independence"""
    report = check_specialisation_independence(policy_from_name(name), trials=0)
    assert report.verdict == FAILED
    assert report.trials == 2


def test_congruence_oracle():
    """Test the interleaving decision against brute force"""
    report = check_congruence_oracle(trials=30, seed=5)
    assert report.passed, report.failures


def test_priority_axioms():
    """Test merge, concatenation and shifting laws on sampled goals"""
    report = check_priority_axioms(trials=50, seed=11)
    assert report.passed, report.failures
    assert report.trials == 50


@pytest.mark.parametrize('name, overrides', [
    ('queue', {}),
    ('sq', {}),
    ('sq', {'c1': 0}),
    ('sq', {'c1': 1}),
    ('sq', {'c1': 2}),
])
def test_split_rules_are_specialisation_independent(name, overrides):
    """Test queue and per-clause stack-queue splits keep sampled lowerings congruent"""
    report = check_specialisation_independence(policy_from_name(name, overrides), trials=60, seed=4)
    assert report.passed, report.failures


@pytest.mark.parametrize('name', ['center', 'pred-special:s'])
def test_other_rules_fail_on_random_instances(name):
    """Test random lowerings alone find counterexamples for rules outside the stack-queue family"""
    report = check_specialisation_independence(policy_from_name(name), trials=400, seed=0, include_fixed=False)
    assert report.verdict == FAILED
    assert report.trials == 400
    assert report.failures[0].seed == 0


def test_lowering_trials():
    """Test sampled lowerings under the stack rule find no counterexample"""
    report = lowering_trials(policy_from_name('stack'), trials=20, seed=1, workers=1)
    assert not report.failures
    assert report.trials == 20


def test_lifting_trials():
    """Test sampled derivations of specialised goals lift under the stack rule"""
    report = lifting_trials(policy_from_name('stack'), trials=30, seed=1, workers=1)
    assert report.passed, report.failures


@pytest.mark.parametrize('name', ['stack', 'queue'])
def test_determinism(name):
    """Test templates replay from p-variants and split runs compose"""
    report = check_determinism(policy_from_name(name), trials=30, seed=2, workers=1)
    assert report.passed, report.failures
    assert report.details['steps'] > 0


@pytest.mark.parametrize('full', [False, True])
def test_duplication_trials(full):
    """Test duplicating blocks or single atoms of random ground goals keeps every template"""
    report = duplication_trials(policy_from_name('stack'), trials=5, seed=3, workers=1, full=full)
    assert not report.failures
    assert report.trials == 5


def test_full_duplication_on_ground_program():
    """Test a copy of q scheduled last keeps every template of the duplication example"""
    example = get_example('duplication')
    report = check_full_duplication(policy_from_name('stack'), example.program(), example.goal(), [1])
    assert report.passed
    assert report.trials > 0


def test_embedding_trials():
    """Test random reduced derivations over the sample programs embed"""
    pairs = [(example.program(), example.goal()) for example in sample_programs()]
    report = embedding_trials(policy_from_name('stack'), pairs, trials=12, seed=1, workers=1, max_steps=4)
    assert report.passed, report.failures


def test_step_lifting():
    """Test a clause applying to an instance applies to the general atom"""
    report = check_step_lifting(trials=50, seed=1, workers=1)
    assert not report.failures


def test_instance_relation():
    """Test lowered resolvents are instances of the base resolvents"""
    report = check_instance_relation(policy_from_name('stack'), trials=50, seed=1, workers=1)
    assert report.passed, report.failures


def test_instance_replay():
    """Test a template replays from instances of its own computed answer"""
    report = check_instance_replay(policy_from_name('stack'), trials=30, seed=1, workers=1)
    assert report.passed, report.failures


def test_preq_determinism():
    """Test pre-queued derivations replay from a renamed and shifted part"""
    report = check_preq_determinism(policy_from_name('stack'), trials=30, seed=1, workers=1)
    assert report.passed, report.failures


def test_priority_embedding_of_pred_special_prefixes():
    """Test short prefixes embed but longer reduced derivations via pred-special do not"""
    example = get_example('pred-special')
    program = example.program()
    short = example.run('prsld', max_steps=3)
    found = find_priority_embedding(program, short, node_budget=200_000)
    assert is_sublist(short.labels(), found.labels())
    for steps in (4, 6, 9):
        record = example.run('prsld', max_steps=steps)
        assert len(record) == steps
        with pytest.raises(NoEmbedding):
            find_priority_embedding(program, record, node_budget=200_000)
