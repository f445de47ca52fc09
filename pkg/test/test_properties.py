#!/usr/bin/env python3
"""
Property based tests over generated terms, goals and shiftings
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from hypothesis import given, settings, strategies as st

from src.core.priority import find_shifting, p_variant_of
from src.core.unify import mgu, subsumes_as_list, variant_of
from src.engine.reduction import reduce_list_goal, reduce_priority_goal, verify_reduction
from test import strategies as gen


@given(gen.atoms(), gen.atoms())
def test_mgu_unifies(left, right):
    """Test a found mgu makes both atoms equal and is idempotent"""
    theta = mgu(left, right)
    if theta is None:
        return
    assert theta.apply(left) == theta.apply(right)
    assert theta.is_idempotent()


@given(gen.atom_lists(), gen.renamings())
def test_renamed_lists_are_variants(items, renaming):
    """Test a list and its renaming are variants in both directions"""
    renamed = [renaming.apply(atom) for atom in items]
    assert variant_of(items, renamed) is not None
    assert variant_of(renamed, items) is not None


@given(gen.atom_lists(), gen.substitutions())
def test_instances_are_subsumed(items, sigma):
    """Test a list subsumes every instance of itself, position by position"""
    instance = [sigma.apply(atom) for atom in items]
    found = subsumes_as_list(items, instance)
    assert found is not None
    assert [found.apply(atom) for atom in items] == instance


@settings(deadline=None)
@given(gen.atom_lists(gen.flat_terms))
def test_list_reduction_certificates(items):
    """Test greedy reductions verify and never grow the goal"""
    reduced, certificate = reduce_list_goal(items)
    assert verify_reduction(items, reduced, certificate)
    assert len(reduced) <= len(items)


@settings(deadline=None)
@given(gen.priority_goals(), st.booleans())
def test_priority_reduction_certificates(goal, advancement):
    """Test priority reductions verify and keep priorities of the goal"""
    reduced, certificate = reduce_priority_goal(goal, advancement=advancement)
    assert verify_reduction(goal, reduced, certificate)
    assert set(reduced.priorities()) <= set(goal.priorities())


@given(st.data())
def test_shifted_goals_are_p_variants(data):
    """Test shifting and renaming a goal gives a p-variant with that shifting"""
    goal = data.draw(gen.priority_goals())
    shifting = data.draw(gen.shiftings(goal.priorities()))
    renaming = data.draw(gen.renamings())
    moved = goal.apply(renaming).shift(shifting)
    assert find_shifting(goal, goal.shift(shifting)) == shifting
    found = p_variant_of(goal, moved)
    assert found is not None
    assert found[1] == shifting
