#!/usr/bin/env python3
"""
Tests for positioning policies and list selection rules
"""
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from src.core.errors import EmptyGoal, RuleError
from src.engine.scheduling import (ALL_SELECTIONS, CenterInsertPolicy, IndexSelection,
                                   LeftmostSelection, OddEvenSelection, PredSpecialPolicy,
                                   ReplayPlacementPolicy, RightmostSelection, StackQueuePolicy,
                                   StackQueueSplit, is_stack_queue_policy, is_stack_queue_shaped,
                                   policy_from_name, rule_from_name, select_atom, selection_from_name)
from src.parsers.program_parser import parse_atom, parse_atom_list, parse_clause, parse_goal


def _place(policy, goal_text, clause_text):
    goal = parse_goal(goal_text)
    clause = parse_clause(clause_text)
    selected = select_atom(goal)
    return policy.place(goal.without(selected), selected, clause.body, clause)


def test_select_atom_takes_minimum():
    """Test the atom of least priority is selected"""
    assert select_atom(parse_goal('q[2], p[1.5]')).atom == parse_atom('p')
    with pytest.raises(EmptyGoal):
        select_atom(parse_goal(''))


def test_stack_queue_placement():
    """Test stack part below min(K), queue part above max(K)"""
    priorities = _place(StackQueuePolicy(), 'p[1], q[2], r[3]', 'p <- a, b | c.')
    assert priorities == [0, 1, 4]


def test_stack_queue_on_empty_rest():
    """Test placement around the selected atom when K is empty"""
    priorities = _place(StackQueuePolicy(), 'p[1]', 'p <- a | b.')
    assert priorities == [0, 2]


def test_split_modes_and_overrides():
    """Test all-stack, all-queue and per clause split overrides"""
    clause = parse_clause('c7: p <- a, b | c.')
    assert StackQueueSplit('stack').split_for(clause) == 3
    assert StackQueueSplit('queue').split_for(clause) == 0
    assert StackQueueSplit('clause').split_for(clause) == 2
    assert StackQueueSplit('clause', {'c7': 1}).split_for(clause) == 1
    assert StackQueueSplit('clause', {'c7': 9}).split_for(clause) == 3


def test_center_insertion():
    """Test new atoms go between K[len(K)//2 - 1] and K[len(K)//2]"""
    priorities = _place(CenterInsertPolicy(), 'p[1], q[2], r[3], s[4]', 'p <- a, b.')
    assert priorities == [Fraction(5, 2), Fraction(11, 4)]


def test_center_insertion_single_old_atom():
    """Test a one atom K puts the new atoms in front of it"""
    assert _place(CenterInsertPolicy(), 's[1], p(a)[2]', 's <- p(b).') == [1]
    assert _place(CenterInsertPolicy(), 's[1], p(a)[1.5], r[2]', 's <- p(b).') == [Fraction(7, 4)]


def test_pred_special_placement():
    """Test the special predicate inserts after the first old atom, others stack"""
    policy = PredSpecialPolicy('s')
    assert _place(policy, 's(x, y)[1], r[2], q[3]', 's(x, y) <- t(x, y).') == [Fraction(5, 2)]
    assert _place(policy, 's(x, y)[1], r[2]', 's(x, y) <- t(x, y).') == [3]
    assert _place(policy, 'q[1], r[2], t[3]', 'q <- a, b.') == [0, 1]


def test_replay_placement():
    """Test replayed priorities must fit the body and avoid K"""
    clause = parse_clause('p <- a, b.')
    goal = parse_goal('p[1], q[2]')
    selected = select_atom(goal)
    rest = goal.without(selected)
    assert ReplayPlacementPolicy([5, 6]).place(rest, selected, clause.body, clause) == [5, 6]
    with pytest.raises(RuleError):
        ReplayPlacementPolicy([5]).place(rest, selected, clause.body, clause)
    with pytest.raises(RuleError):
        ReplayPlacementPolicy([2, 6]).place(rest, selected, clause.body, clause)


def test_stack_queue_shape():
    """Test the M_s -| K -| M_q shape of new priorities"""
    rest = parse_goal('q[2], r[3]')
    assert is_stack_queue_shaped(rest, [1, 4])
    assert is_stack_queue_shaped(rest, [Fraction(1, 2), 1])
    assert not is_stack_queue_shaped(rest, [Fraction(5, 2)])
    assert not is_stack_queue_shaped(rest, [4, 1])
    assert is_stack_queue_shaped(parse_goal(''), [7, 8])


@pytest.mark.parametrize('length, index', [(1, 0), (2, 1), (3, 0), (4, 3)])
def test_odd_even_selection(length, index):
    """Test first atom for odd lengths, last for even lengths"""
    atoms = parse_atom_list(', '.join(['p'] * length))
    assert OddEvenSelection()(atoms) == index


def test_list_selections():
    """Test leftmost, rightmost and fixed index selection"""
    atoms = parse_atom_list('p, q, r')
    assert LeftmostSelection()(atoms) == 0
    assert RightmostSelection()(atoms) == 2
    assert IndexSelection(1)(atoms) == 1
    with pytest.raises(RuleError):
        IndexSelection(5)(atoms)
    with pytest.raises(EmptyGoal):
        LeftmostSelection()([])


def test_rules_by_name():
    """Test rule names in list and priority mode"""
    assert is_stack_queue_policy(policy_from_name('stack'))
    assert is_stack_queue_policy(policy_from_name('sq'))
    assert policy_from_name('queue').name == 'queue'
    assert str(policy_from_name('center')) == 'center'
    assert policy_from_name('pred-special:s').special == 's'
    assert not is_stack_queue_policy(policy_from_name('center'))
    assert isinstance(selection_from_name('stack'), LeftmostSelection)
    assert selection_from_name('all') == ALL_SELECTIONS
    assert isinstance(rule_from_name('odd-even', True), OddEvenSelection)


@pytest.mark.parametrize('name', ['pred-special:', 'leftmost', 'odd-even', 'nonsense'])
def test_bad_policy_names(name):
    """Test unknown or list-only names are rejected in priority mode"""
    with pytest.raises(RuleError):
        policy_from_name(name)


def test_bad_selection_names():
    """Test priority-only names are rejected in list mode"""
    with pytest.raises(RuleError):
        selection_from_name('center')


def test_policy_is_pure():
    """Test placing twice gives the same priorities"""
    policy = CenterInsertPolicy()
    first = _place(policy, 'p[1], q[2], r[3]', 'p <- a, b, c.')
    assert first == _place(policy, 'p[1], q[2], r[3]', 'p <- a, b, c.')
