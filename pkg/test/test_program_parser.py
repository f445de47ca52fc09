#!/usr/bin/env python3
"""
Tests for the program and goal parser
"""
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from src.core.errors import ParseError
from src.core.terms import Struct, Var
from src.parsers.program_parser import (load_program, parse_atom, parse_clause, parse_goal,
                                        parse_program, parse_term)

PATHS = """
% reachability
c1: e(a,b) <-.
c2: e(b,c) <-.
c4: t(x,y) <- e(x,y).
c5: t(x,y) <- e(x,z) | t(z,y).
"""


def test_parse_program():
    """Test labels, facts and the stack/queue split"""
    program = parse_program(PATHS)
    assert program.labels() == ['c1', 'c2', 'c4', 'c5']
    assert program.clause('c1').is_fact
    recursive = program.clause('c5')
    assert [str(atom) for atom in recursive.stack_body] == ['e(x,z)']
    assert [str(atom) for atom in recursive.queue_body] == ['t(z,y)']
    assert recursive.split == 1
    assert program.arities() == {'e': 2, 't': 2}
    with pytest.raises(KeyError):
        program.clause('c3')


def test_default_labels_and_prolog_arrow():
    """Test unlabelled clauses are numbered and ':-' reads as '<-'"""
    program = parse_program('p :- q.\nq.')
    assert program.labels() == ['c1', 'c2']
    assert program.clause('c1').body == (parse_atom('q'),)


def test_program_text_reads_back():
    """Test the printed program parses to the same clauses"""
    program = parse_program(PATHS)
    assert parse_program(str(program)).clauses == program.clauses


def test_summary():
    """Test the program summary"""
    summary = parse_program(PATHS, 'paths.lp').get_summary()
    assert summary == {'source': 'paths.lp', 'clauses': 4, 'facts': 2, 'predicates': ['e', 't'],
                       'function_symbols': False}
    assert parse_program('p(f(x)) <- p(x).').has_function_symbols()


def test_uniform_split():
    """Test the all-stack and all-queue versions of a program"""
    program = parse_program(PATHS)
    assert program.with_uniform_split('stack').clause('c5').split == 2
    assert program.with_uniform_split('queue').clause('c5').split == 0


def test_terms_and_variables():
    """Test variables by name, constants and nested terms"""
    assert parse_term('x') == Var('x')
    assert parse_term('X1') == Var('X1')
    assert parse_term('y_2') == Var('y_2')
    assert parse_term('a') == Struct('a')
    assert parse_term('f(x, g(b))') == Struct('f', (Var('x'), Struct('g', (Struct('b'),))))


def test_goal_priorities():
    """Test explicit priorities, defaults and the '|' separator"""
    goal = parse_goal('q(x,x1) | t(x1,x)')
    assert goal.priorities() == (1, 2)
    explicit = parse_goal('p[1.5], q[7/4], r[-2].')
    assert [pa.atom.predicate for pa in explicit] == ['r', 'p', 'q']
    assert explicit.priorities() == (Fraction(-2), Fraction(3, 2), Fraction(7, 4))
    assert not parse_goal('')


@pytest.mark.parametrize('text', [
    'p <- q | r | s.',
    'p <- q',
    'x(a) <- .',
    'p(X(a)).',
    'a: p.\na: q.',
    'p(a) <- p.',
])
def test_program_errors(text):
    """Test malformed programs raise ParseError"""
    with pytest.raises(ParseError):
        parse_program(text)


def test_error_position():
    """Test parse errors carry line and column"""
    with pytest.raises(ParseError) as info:
        parse_program('p <- q,\n  & .')
    assert info.value.line == 2
    assert info.value.column == 3
    assert 'line 2, column 3' in str(info.value)


@pytest.mark.parametrize('text', ['p[x]', 'p q', 'p[1], q(a)[2], q'])
def test_goal_errors(text):
    """Test malformed goals and arity conflicts"""
    with pytest.raises(ParseError):
        parse_goal(text)


def test_goal_arity_against_program():
    """Test goal predicates must agree with program arities"""
    with pytest.raises(ParseError):
        parse_goal('t(a)', parse_program(PATHS).arities())


def test_clause_text():
    """Test a single clause and its printed form"""
    clause = parse_clause('c: p <- | q.')
    assert str(clause) == 'c: p <- | q.'
    with pytest.raises(ParseError):
        parse_clause('p. q.')


def test_load_program(programs_dir):
    """Test shipped programs load and a missing file is a parse error"""
    program = load_program(programs_dir / 'paths.lp')
    assert len(program) == 5
    with pytest.raises(ParseError):
        load_program(programs_dir / 'missing.lp')


@pytest.mark.parametrize('text, name', [('x(a) <- .', 'x'), ('p(v3(a)).', 'v3'), ('p <- q, w2.', 'w2')])
def test_variable_names_in_errors(text, name):
    """Test errors on variable-shaped symbols explain which names are variables"""
    with pytest.raises(ParseError) as info:
        parse_program(text)
    assert f"'{name}'" in str(info.value)
    assert 'u to z' in str(info.value)


def test_variable_name_in_goal_error():
    """Test a goal atom named like a variable gets the same explanation"""
    with pytest.raises(ParseError) as info:
        parse_goal('p, x')
    assert "variable 'x'" in str(info.value)
