#!/usr/bin/env python3
"""
Tests for the worked examples: the derivations each shipped program is meant to show
"""
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.priority import p_variant_of
from src.core.unify import variant_of
from src.engine.derivation import DerivationStatus, DeriveOptions, derive
from src.engine.loop_check import EVRL
from src.engine.scheduling import OddEvenSelection
from src.engine.tree import build_tree
from src.lab.catalogue import get_example
from src.parsers.program_parser import parse_goal


def _options(**overrides):
    return DeriveOptions.from_config(**overrides)


def test_odd_even_first_reduced_resolvents():
    """Test the first reduced resolvents of the odd-even loop up to renaming"""
    example = get_example('odd-even-loop')
    record = example.run(max_steps=2)
    expected = ['q, p(x,x)',
                'q, p(x,y1), p(y1,y2), p(y2,x)',
                'q, p(x,y1), p(y1,y2), p(y2,y3), p(y3,y4), p(y4,x)']
    for entry, text in zip(record.entries, expected):
        assert variant_of(parse_goal(text).sequence(), entry.reduced.sequence()) is not None, entry.reduced
        assert 'x' in entry.reduced.vars()
    assert len(record.entries) == 3


def test_odd_even_loop_runs_fifty_steps():
    """Test fifty reducing steps stay quick and the goal grows by two atoms per step"""
    example = get_example('odd-even-loop')
    started = time.monotonic()
    record = derive(example.program(), example.goal(), 'rsld', OddEvenSelection(), _options(max_steps=50))
    assert time.monotonic() - started < 30
    assert record.status == DerivationStatus.BOUND_EXCEEDED
    assert record.reduced_lengths() == [2 * k + 2 for k in range(51)]


def test_odd_even_tree_without_reduction():
    """Test every plain derivation with the odd-even rule fails"""
    example = get_example('odd-even-loop')
    tree = build_tree(example.program(), example.goal(), 'sld', OddEvenSelection(), depth=10)
    assert tree.is_finite()
    assert tree.all_leaves_failed()


def test_centre_lifting_goals():
    """Test the specialised goal runs on while the general goal fails at its second resolvent"""
    example = get_example('centre-lifting')
    specialised = example.run(max_steps=50)
    assert specialised.status == DerivationStatus.BOUND_EXCEEDED
    assert len(specialised) == 50
    general = derive(example.program(), example.goal('general'), 'psld', example.rule(), _options())
    assert general.status == DerivationStatus.FAILED
    assert len(general) == 1


def test_advancement_stops_the_loop():
    """Test the eliminating atom takes the least priority and the derivation fails"""
    example = get_example('advancement')
    record = example.run()
    assert record.status == DerivationStatus.FAILED
    assert len(record) <= 3
    assert str(record.entries[1].reduced).startswith('q(a)')


def test_without_advancement_the_goal_repeats():
    """Test keeping priorities brings back p, q(a) after every step"""
    example = get_example('advancement')
    record = example.run(advancement=False, max_steps=50)
    assert record.status == DerivationStatus.BOUND_EXCEEDED
    start = parse_goal('p[1], q(a)[2]')
    assert all(p_variant_of(start, entry.reduced) is not None for entry in record.entries)


def test_pred_special_tree_is_finite():
    """Test every p-SLD derivation via pred-special fails"""
    example = get_example('pred-special')
    tree = build_tree(example.program(), example.goal(), 'psld', example.rule(), depth=10)
    assert tree.is_finite()
    assert tree.all_leaves_failed()


def test_pred_special_reduction_escapes_the_loop_check():
    """Test the reducing derivation runs to the bound without a prune witness"""
    example = get_example('pred-special')
    record = example.run('prsld', max_steps=50, loop_check=EVRL)
    assert record.status == DerivationStatus.BOUND_EXCEEDED
    assert record.witness is None
    assert len(record) == 50
