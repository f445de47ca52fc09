#!/usr/bin/env python3
"""
Tests for derivation steps and the derivation driver in all four modes
"""
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from src.core.errors import DerivationIndexError, RuleError, UnknownTag
from src.core.lineage import STACK, LineageTag, initial_tag
from src.core.terms import vars_of
from src.engine.derivation import (DerivationMode, DerivationStatus, DeriveOptions, derive,
                                   is_a_preq, is_a_queued, list_derivation_step, p_derivation_step,
                                   resultant_at, sub_resolvent, sub_template, tag_initial_goal)
from src.engine.scheduling import (IndexSelection, LeftmostSelection, OddEvenSelection,
                                   policy_from_name, selection_from_name)
from src.lab.catalogue import get_example
from src.parsers.program_parser import parse_atom, parse_clause, parse_goal, parse_program


def _options(**overrides):
    return DeriveOptions.from_config(**overrides)


def test_modes():
    """Test list and reducing modes"""
    assert DerivationMode.SLD.is_list_mode and not DerivationMode.SLD.reduces
    assert DerivationMode.RSLD.is_list_mode and DerivationMode.RSLD.reduces
    assert not DerivationMode.PSLD.is_list_mode and not DerivationMode.PSLD.reduces
    assert DerivationMode.PRSLD.reduces


def test_options_ignore_unset_overrides():
    """Test None overrides keep configured values"""
    assert _options(max_steps=None).max_steps == 1000
    assert _options(max_steps=5).max_steps == 5
    assert _options(advancement=None).advancement is True


def test_p_step_on_minimum_atom():
    """Test a priority step rewrites the least atom and places its body by the policy"""
    goal = parse_goal('p[1], q[2], r[3]')
    step = p_derivation_step(goal, parse_clause('c: p <- a, b | c.'), policy_from_name('sq'))
    assert step.resolvent == parse_goal('a[0], b[1], q[2], r[3], c[4]')
    assert step.new_priorities == (0, 1, 4)
    assert [pa.tag.mode for pa in step.new_atoms] == [STACK, STACK, 'queue']
    assert all(pa.tag.parent == initial_tag(0) for pa in step.new_atoms)


def test_p_step_without_unifier():
    """Test a clause whose head does not unify gives no step"""
    goal = parse_goal('p(a)[1]')
    assert p_derivation_step(goal, parse_clause('p(b) <- .'), policy_from_name('stack')) is None
    assert p_derivation_step(goal, parse_clause('q <- .'), policy_from_name('stack')) is None


def test_list_step_replaces_in_place():
    """Test a list step replaces the selected atom by the body and renumbers"""
    goal = tag_initial_goal(parse_goal('q, p(x, x), r'))
    step = list_derivation_step(goal, selection_from_name('rightmost'), parse_clause('r <- s, t.'))
    assert [str(atom) for atom in step.resolvent.sequence()] == ['q', 'p(x,x)', 's', 't']
    assert step.resolvent.priorities() == (1, 2, 3, 4)
    inner = list_derivation_step(goal, IndexSelection(1), parse_clause('p(x, y) <- m(x), n(y).'))
    assert [str(atom) for atom in inner.resolvent.sequence()] == ['q', 'm(x)', 'n(x)', 'r']


def test_rule_must_fit_mode():
    """Test list rules only in list modes and policies only in priority modes"""
    program = parse_program('p <- .')
    goal = parse_goal('p')
    with pytest.raises(RuleError):
        derive(program, goal, 'psld', LeftmostSelection())
    with pytest.raises(RuleError):
        derive(program, goal, 'sld', policy_from_name('stack'))
    with pytest.raises(RuleError):
        derive(program, goal, 'sld', None)


def test_refutation_and_answer():
    """Test reachability is refuted and the accumulated mgu gives the answer"""
    example = get_example('paths')
    record = example.run()
    assert record.status == DerivationStatus.REFUTED
    assert record.labels() == ['c4', 'c1']
    assert record.accumulated.apply_atom(parse_atom('t(a, y)')) == parse_atom('t(a, b)')
    assert record.final().instantiated_goal.sequence() == (parse_atom('t(a, b)'),)
    assert not record.final().reduced


def test_bound_exceeded():
    """Test the step bound stops an infinite derivation after exactly max_steps steps"""
    example = get_example('loop')
    record = derive(example.program(), example.goal(), 'sld', LeftmostSelection(), _options(max_steps=5))
    assert record.status == DerivationStatus.BOUND_EXCEEDED
    assert len(record) == 5
    assert len(record.entries) == 6


def test_loop_check_prunes():
    """Test the equality loop check stops p <- p at the first repetition"""
    example = get_example('loop')
    record = derive(example.program(), example.goal(), 'sld', LeftmostSelection(),
                    _options(loop_check='evrl'))
    assert record.status == DerivationStatus.PRUNED
    assert record.witness.indices == (0, 1)


def test_odd_even_terminates_without_reduction():
    """Test the odd-even rule fails after one step in plain list mode"""
    example = get_example('odd-even-loop')
    record = derive(example.program(), example.goal(), 'sld', OddEvenSelection(), _options())
    assert record.status == DerivationStatus.FAILED
    assert len(record) == 1
    assert len(record.final().resolvent) == 5


def test_odd_even_grows_under_reduction():
    """Test reduction keeps the goal length even so the rule never reaches q"""
    example = get_example('odd-even-loop')
    record = derive(example.program(), example.goal(), 'rsld', OddEvenSelection(),
                    _options(max_steps=6, loop_check='evrl'))
    assert record.status == DerivationStatus.BOUND_EXCEEDED
    assert record.reduced_lengths() == [2, 4, 6, 8, 10, 12, 14]


def test_standardisation_apart():
    """Test every renamed clause avoids the variables already used"""
    example = get_example('odd-even-loop')
    record = derive(example.program(), example.goal(), 'rsld', OddEvenSelection(), _options(max_steps=4))
    seen = set(record.initial_goal.vars())
    for entry in record.entries[:-1]:
        renamed = vars_of(entry.step.renamed)
        assert renamed.isdisjoint(seen)
        assert renamed.isdisjoint(entry.reduced.vars())
        seen |= renamed


def test_stack_derivation_fails():
    """Test the ground program under the stack policy"""
    example = get_example('duplication')
    record = example.run('psld')
    assert record.status == DerivationStatus.FAILED
    assert record.labels() == ['c1', 'c2', 'c3']
    assert record.entries[1].resolvent == parse_goal('q[0], r[1], q[2], r[3], s[4]')


def test_reduction_in_priority_mode():
    """Test reduced resolvents of the ground program"""
    example = get_example('duplication')
    record = example.run('prsld')
    assert record.status == DerivationStatus.FAILED
    assert record.reduced_lengths() == [4, 3, 2, 1]
    assert record.entries[1].reduced == parse_goal('q[0], r[1], s[4]')


def test_center_policy_runs():
    """Test the centre policy on the base and specialised goals"""
    example = get_example('centre-lowering')
    policy = example.rule()
    base = derive(example.program(), example.goal(), 'psld', policy, _options())
    assert base.entries[2].resolvent == parse_goal('q(b)[1], p(a)[2]')
    specialised = derive(example.program(), example.goal('specialised'), 'psld', policy, _options())
    assert specialised.entries[1].resolvent == parse_goal('p(a)[1.5], p(b)[7/4], r[2]')
    assert specialised.entries[2].resolvent == parse_goal('p(b)[7/4], q(a)[15/8], r[2]')


def test_sub_templates_and_sub_resolvents():
    """Test lineage based projections of a derivation"""
    record = get_example('duplication').run('psld')
    assert [c.label for c in sub_template(record, {initial_tag(0)})] == ['c1', 'c2', 'c3']
    assert sub_template(record, {initial_tag(1)}) == []
    assert sub_resolvent(record, {initial_tag(1)}) == parse_goal('q[2]')
    with pytest.raises(UnknownTag):
        sub_template(record, {LineageTag(7, 0, STACK)})


def test_preq_and_queued():
    """Test stack-only descent from the first atom"""
    record = get_example('duplication').run('psld')
    assert is_a_preq(record, {initial_tag(0)})
    assert not is_a_preq(record, {initial_tag(1)})
    assert not is_a_queued(record, {initial_tag(0)})


def test_resultants():
    """Test resultants pair the reduced resolvent with the instantiated goal"""
    record = get_example('paths').run()
    first = resultant_at(record, 0)
    assert first.reduced == record.initial_goal
    assert first.instantiated_goal == record.initial_goal
    with pytest.raises(DerivationIndexError):
        resultant_at(record, 10)


def test_tag_initial_goal_keeps_tags():
    """Test existing tags survive and untagged goals get position tags"""
    goal = parse_goal('p, q')
    assert tag_initial_goal(goal) is goal
    from_list = tag_initial_goal([parse_atom('p'), parse_atom('q')])
    assert from_list.tags() == (initial_tag(0), initial_tag(1))
    assert from_list.priorities() == (Fraction(1), Fraction(2))
