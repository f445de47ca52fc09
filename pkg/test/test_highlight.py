#!/usr/bin/env python3
"""
Test script for terminal syntax highlighting of programs and traces
"""
import io
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from pygments.token import Comment, Name, Number

from src.viewers.lp_highlighter import highlight_text, lexer_manager, load_rules, use_color


def _tokens(language, text):
    lexer = lexer_manager.get_lexer(language)
    return [(token, value) for token, value in lexer.get_tokens(text) if value.strip()]


def test_supported_languages():
    """Test the rule files under highlight/ are found by extension"""
    assert lexer_manager.get_supported_languages() == ['lp', 'trace']
    assert lexer_manager.get_lexer_for_file('programs/loop.lp') is not None
    assert lexer_manager.get_lexer_for_file('notes.txt') is None


def test_missing_rules():
    """Test unknown languages have no rules and no lexer"""
    assert load_rules('cobol') is None
    assert lexer_manager.get_lexer('cobol') is None


def test_trace_tokens():
    """Test priorities, comments and variables in a trace line"""
    tokens = _tokens('trace', 'G1: p(x)[3/2], q(a)[2]  % open')
    assert (Number, '[3/2]') in tokens
    assert (Name.Variable, 'x') in tokens
    assert (Name.Function, 'p') in tokens
    assert any(token in Comment for token, _ in tokens)


def test_color_modes():
    """Test forced, disabled and tty dependent colour"""
    assert use_color('always')
    assert not use_color('never')
    assert not use_color('auto', io.StringIO())


def test_highlight_text():
    """Test colour codes only when colour is on"""
    text = 'c1: p(x) <- q(x).'
    assert highlight_text(text, 'lp', 'never') == text
    coloured = highlight_text(text, 'lp', 'always')
    assert '\x1b[' in coloured
    assert highlight_text(text, 'cobol', 'always') == text
