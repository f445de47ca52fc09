#!/usr/bin/env python3
"""
Tests for priority atoms, priority goals, shiftings and p-variants
"""
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest
from hypothesis import given, strategies as st

from src.core.errors import OrderViolation, ParseError, PriorityClash, ShiftingError
from src.core.lineage import initial_tag
from src.core.priority import (PriorityAtom, PriorityGoal, Shifting, allocate_above, allocate_below,
                               allocate_between, concat, find_shifting, fresh_between, merge,
                               p_variant_of, parse_priority)
from src.core.terms import Renaming
from src.parsers.program_parser import parse_atom, parse_goal


def test_parse_priority_forms():
    """Test integers, fractions and decimals parse to exact rationals"""
    assert parse_priority('3') == Fraction(3)
    assert parse_priority('7/4') == Fraction(7, 4)
    assert parse_priority('12.5') == Fraction(25, 2)
    with pytest.raises(ParseError):
        parse_priority('x')
    with pytest.raises(ParseError):
        parse_priority('1/0')


def test_goal_is_ordered_by_priority():
    """Test iteration in ascending priority regardless of input order"""
    goal = parse_goal('q[3], p[1], r[2]')
    assert [pa.atom.predicate for pa in goal] == ['p', 'r', 'q']
    assert goal.first().atom == parse_atom('p')
    assert goal.min_priority() == 1 and goal.max_priority() == 3


def test_default_priorities_follow_text_order():
    """Test atoms without a priority get 1, 2, ... by position"""
    goal = parse_goal('p, q(a), r')
    assert goal.priorities() == (1, 2, 3)
    assert goal.tags() == (initial_tag(0), initial_tag(1), initial_tag(2))


def test_priority_clash():
    """Test two atoms may not share a priority"""
    with pytest.raises(PriorityClash):
        parse_goal('p[1], q[1]')
    with pytest.raises(PriorityClash):
        merge(parse_goal('p[1]'), parse_goal('q[1]'))


def test_equality_ignores_lineage():
    """Test tags do not take part in goal equality"""
    atom = parse_atom('p(a)')
    tagged = PriorityGoal([PriorityAtom(atom, Fraction(1), initial_tag(0))])
    untagged = PriorityGoal([PriorityAtom(atom, Fraction(1))])
    assert tagged == untagged
    assert hash(tagged) == hash(untagged)


def test_concat_needs_precedence():
    """Test F | G is defined only when F precedes G"""
    first, second = parse_goal('p[1], q[2]'), parse_goal('r[3]')
    assert (first | second).priorities() == (1, 2, 3)
    with pytest.raises(OrderViolation):
        concat(second, first)
    assert parse_goal('').precedes(first)


def test_fresh_between():
    """Test intermediate priorities with infinite bounds"""
    assert fresh_between(None, None) == 0
    assert fresh_between(None, Fraction(2)) == 1
    assert fresh_between(Fraction(1), None) == 2
    assert fresh_between(Fraction(1), Fraction(2)) == Fraction(3, 2)
    with pytest.raises(OrderViolation):
        fresh_between(Fraction(2), Fraction(2))


def test_allocation():
    """Test allocated runs are increasing and on the right side of their bounds"""
    assert allocate_below(Fraction(2), 2) == [0, 1]
    assert allocate_above(Fraction(3), 2) == [4, 5]
    assert allocate_between(Fraction(2), Fraction(3), 2) == [Fraction(5, 2), Fraction(11, 4)]
    assert allocate_between(None, Fraction(1), 1) == [0]


@given(st.fractions(min_value=-100, max_value=100), st.fractions(min_value=-100, max_value=100),
       st.integers(min_value=0, max_value=6))
def test_allocate_between_stays_inside(x, y, count):
    """Test allocate_between gives count increasing values strictly inside (low, high)"""
    low, high = min(x, y), max(x, y)
    if low == high:
        return
    values = allocate_between(low, high, count)
    assert len(values) == count
    assert all(low < v < high for v in values)
    assert values == sorted(set(values))


def test_shifting_must_increase():
    """Test shiftings are strictly increasing"""
    Shifting({1: 2, 2: 5})
    with pytest.raises(ShiftingError):
        Shifting({1: 3, 2: 3})
    with pytest.raises(ShiftingError):
        Shifting({1: 3, 2: 2})


def test_shifting_outside_support():
    """Test applying a shifting to an unknown priority"""
    shifting = Shifting({1: 10})
    assert shifting(Fraction(1)) == 10
    with pytest.raises(ShiftingError):
        shifting(Fraction(2))


def test_shifting_compose_and_inverse():
    """Test composition and inverse"""
    first = Shifting({1: 2, 3: 4})
    second = Shifting({2: 7, 4: 9})
    assert first.compose(second) == Shifting({1: 7, 3: 9})
    assert first.compose(first.inverse()).is_identity()


def test_shift_goal():
    """Test a shifting keeps the atom order"""
    goal = parse_goal('p[1], q[2]')
    shifted = goal.shift(Shifting({1: Fraction(1, 2), 2: 5}))
    assert shifted.priorities() == (Fraction(1, 2), 5)
    assert shifted.sequence() == goal.sequence()


def test_find_shifting():
    """Test shiftings between goals with the same ordered atoms"""
    assert find_shifting(parse_goal('p[1], q[2]'), parse_goal('p[5], q[9]')) == Shifting({1: 5, 2: 9})
    assert find_shifting(parse_goal('p[1], q[2]'), parse_goal('q[5], p[9]')) is None


def test_p_variants():
    """Test renaming plus shifting"""
    found = p_variant_of(parse_goal('p(x)[1], q(x, y)[2]'), parse_goal('p(z)[3], q(z, w)[7]'))
    assert found is not None
    renaming, shifting = found
    assert renaming == Renaming({'x': 'z', 'y': 'w'})
    assert shifting == Shifting({1: 3, 2: 7})
    assert p_variant_of(parse_goal('p(x)[1], q(x)[2]'), parse_goal('q(x)[1], p(x)[2]')) is None


goals = st.lists(st.sampled_from(['p', 'q(a)', 'r(x)', 's(x, y)']), max_size=4)


@given(goals, goals)
def test_merge_commutes(left, right):
    """Test F + G = G + F on disjoint priorities"""
    first = PriorityGoal.from_atoms([parse_atom(t) for t in left], [2 * i for i in range(len(left))])
    second = PriorityGoal.from_atoms([parse_atom(t) for t in right],
                                     [2 * i + 1 for i in range(len(right))])
    assert merge(first, second) == merge(second, first)
    assert len(merge(first, second)) == len(left) + len(right)
