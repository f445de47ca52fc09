"""
Program and goal text parser
Reads definite programs with stack/queue body splits and prioritised goals
"""
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

from src.core.errors import ParseError
from src.core.lineage import initial_tag
from src.core.priority import PriorityAtom, PriorityGoal, parse_priority
from src.core.terms import (Atom, Clause, Struct, Term, Var, has_function_symbols,
                            is_variable_name)
from src.utils.log import get_logger

logger = get_logger('parsers')

TOKEN_SPEC = [
    ('COMMENT', r'%[^\n]*'),
    ('NEWLINE', r'\n'),
    ('SPACE', r'[ \t\r]+'),
    ('ARROW', r'<-|:-'),
    ('NUMBER', r'-?[0-9]+(?:\.[0-9]+)?(?:/[0-9]+)?'),
    ('IDENT', r'[A-Za-z_][A-Za-z0-9_]*'),
    ('PUNCT', r'[(),.|\[\]:]'),
]
TOKEN_RE = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))
VARIABLE_HINT = ("names starting with an uppercase letter or '_' are variables, and so are the single letters "
                 "u to z with an optional number, such as x or v3")


@dataclass
class Token:
    """Lexical token with its source position"""
    kind: str
    text: str
    line: int
    column: int


@dataclass
class ProgramFile:
    """Ordered clauses with labels and per-clause stack/queue splits"""
    clauses: List[Clause] = field(default_factory=list)
    source: Optional[str] = None

    def __iter__(self):
        return iter(self.clauses)

    def __len__(self):
        return len(self.clauses)

    def clause(self, label: str) -> Clause:
        for clause in self.clauses:
            if clause.label == label:
                return clause
        raise KeyError(label)

    def labels(self) -> List[str]:
        return [clause.label for clause in self.clauses]

    def arities(self) -> Dict[str, int]:
        result: Dict[str, int] = {}
        for clause in self.clauses:
            for atom in (clause.head,) + clause.body:
                result.setdefault(atom.predicate, atom.arity)
        return result

    def has_function_symbols(self) -> bool:
        return any(has_function_symbols(clause) for clause in self.clauses)

    def with_uniform_split(self, mode: str) -> 'ProgramFile':
        """All-stack ('stack') or all-queue ('queue') version of every clause"""
        index = (lambda c: len(c.body)) if mode == 'stack' else (lambda c: 0)
        return ProgramFile([c.with_split(index(c)) for c in self.clauses], self.source)

    def get_summary(self) -> Dict[str, Any]:
        return {
            'source': self.source,
            'clauses': len(self.clauses),
            'facts': sum(1 for clause in self.clauses if clause.is_fact),
            'predicates': sorted(self.arities()),
            'function_symbols': self.has_function_symbols(),
        }

    def __str__(self):
        return '\n'.join(str(clause) for clause in self.clauses)


class ProgramParser:
    """Recursive descent parser over the program/goal token stream"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> List[Token]:
        tokens: List[Token] = []
        line, line_start, index = 1, 0, 0
        while index < len(text):
            match = TOKEN_RE.match(text, index)
            if not match:
                raise ParseError(f"Unexpected character '{text[index]}'", line, index - line_start + 1)
            kind = match.lastgroup
            if kind == 'NEWLINE':
                line += 1
                line_start = match.end()
            elif kind not in ('SPACE', 'COMMENT'):
                tokens.append(Token(kind, match.group(), line, index - line_start + 1))
            index = match.end()
        tokens.append(Token('EOF', '', line, index - line_start + 1))
        return tokens

    # Token helpers

    def _peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self._peek()
        self.pos += 1
        return token

    def _at(self, text: str) -> bool:
        return self._peek().text == text and self._peek().kind != 'EOF'

    def _expect(self, text: str) -> Token:
        token = self._peek()
        if token.text != text or token.kind == 'EOF':
            found = token.text or 'end of input'
            raise ParseError(f"Expected '{text}' but found '{found}'", token.line, token.column)
        return self._advance()

    def _error(self, message: str) -> ParseError:
        token = self._peek()
        return ParseError(message, token.line, token.column)

    # Grammar

    def parse_term(self) -> Term:
        token = self._peek()
        if token.kind != 'IDENT':
            raise self._error(f"Expected a term but found '{token.text or 'end of input'}'")
        self._advance()
        if is_variable_name(token.text):
            if self._at('('):
                raise ParseError(f"Variable '{token.text}' used as a functor; {VARIABLE_HINT}",
                                 token.line, token.column)
            return Var(token.text)
        return Struct(token.text, self._parse_arguments())

    def _parse_arguments(self) -> Tuple[Term, ...]:
        if not self._at('('):
            return ()
        self._advance()
        args = [self.parse_term()]
        while self._at(','):
            self._advance()
            args.append(self.parse_term())
        self._expect(')')
        return tuple(args)

    def parse_atom(self) -> Atom:
        token = self._peek()
        if token.kind == 'IDENT' and is_variable_name(token.text):
            raise self._error(f"Expected an atom but found the variable '{token.text}'; {VARIABLE_HINT}")
        if token.kind != 'IDENT':
            raise self._error(f"Expected an atom but found '{token.text or 'end of input'}'")
        self._advance()
        return Atom(token.text, self._parse_arguments())

    def _parse_atom_list(self, stops: Tuple[str, ...]) -> List[Atom]:
        atoms: List[Atom] = []
        if any(self._at(stop) for stop in stops):
            return atoms
        atoms.append(self.parse_atom())
        while self._at(','):
            self._advance()
            atoms.append(self.parse_atom())
        return atoms

    def _parse_clause(self, number: int) -> Clause:
        label = ''
        if self._peek().kind == 'IDENT' and self._peek(1).text == ':':
            label = self._advance().text
            self._advance()
        head = self.parse_atom()
        if self._at('.'):
            self._advance()
            return Clause(head, label=label or f"c{number}")
        arrow = self._peek()
        if arrow.kind != 'ARROW':
            raise self._error(f"Expected '<-' or '.' after clause head but found '{arrow.text or 'end of input'}'")
        self._advance()
        stack = self._parse_atom_list(('|', '.'))
        queue: List[Atom] = []
        if self._at('|'):
            self._advance()
            queue = self._parse_atom_list(('.',))
            if self._at('|'):
                raise self._error("A clause body has at most one '|' split")
        self._expect('.')
        return Clause(head, tuple(stack), tuple(queue), label or f"c{number}")

    def parse_program(self) -> List[Clause]:
        clauses: List[Clause] = []
        while self._peek().kind != 'EOF':
            clauses.append(self._parse_clause(len(clauses) + 1))
        labels = [clause.label for clause in clauses]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise ParseError(f"Duplicate clause labels: {', '.join(duplicates)}")
        return clauses

    def parse_goal_items(self) -> List[Tuple[Atom, Optional[Fraction]]]:
        items: List[Tuple[Atom, Optional[Fraction]]] = []
        if self._peek().kind == 'EOF':
            return items
        while True:
            atom = self.parse_atom()
            priority = None
            if self._at('['):
                self._advance()
                token = self._advance()
                if token.kind != 'NUMBER':
                    raise ParseError(f"Expected a priority but found '{token.text}'", token.line, token.column)
                priority = parse_priority(token.text)
                self._expect(']')
            items.append((atom, priority))
            if self._at(',') or self._at('|'):
                self._advance()
                continue
            break
        if self._at('.'):
            self._advance()
        if self._peek().kind != 'EOF':
            raise self._error(f"Unexpected '{self._peek().text}' after goal")
        return items

    def expect_end(self):
        if self._peek().kind != 'EOF':
            raise self._error(f"Unexpected '{self._peek().text}'")


def check_arities(atoms, arities: Dict[str, int]):
    """Each predicate keeps one arity; arities is extended in place"""
    for atom in atoms:
        known = arities.setdefault(atom.predicate, atom.arity)
        if known != atom.arity:
            raise ParseError(f"Predicate '{atom.predicate}' used with arity {atom.arity} and {known}")


def parse_program(text: str, source: Optional[str] = None) -> ProgramFile:
    parser = ProgramParser(text)
    clauses = parser.parse_program()
    arities: Dict[str, int] = {}
    for clause in clauses:
        check_arities((clause.head,) + clause.body, arities)
    logger.debug("Parsed %d clauses from %s", len(clauses), source or '<text>')
    return ProgramFile(clauses, source)


def load_program(path) -> ProgramFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ParseError(f"Cannot read program file {path}: {e}")
    return parse_program(text, str(path))


def parse_goal(text: str, arities: Optional[Dict[str, int]] = None) -> PriorityGoal:
    """Prioritised goal; atom i defaults to priority i, `[r]` overrides"""
    items = ProgramParser(text).parse_goal_items()
    check_arities([atom for atom, _ in items], dict(arities or {}))
    return PriorityGoal(
        PriorityAtom(atom, Fraction(index + 1) if priority is None else priority, initial_tag(index))
        for index, (atom, priority) in enumerate(items))


def parse_atom_list(text: str) -> List[Atom]:
    """Goal read as a list; priority tags are accepted and ignored"""
    return [atom for atom, _ in ProgramParser(text).parse_goal_items()]


def parse_atom(text: str) -> Atom:
    parser = ProgramParser(text)
    atom = parser.parse_atom()
    parser.expect_end()
    return atom


def parse_term(text: str) -> Term:
    parser = ProgramParser(text)
    term = parser.parse_term()
    parser.expect_end()
    return term


def parse_clause(text: str) -> Clause:
    clauses = ProgramParser(text).parse_program()
    if len(clauses) != 1:
        raise ParseError(f"Expected one clause, found {len(clauses)}")
    return clauses[0]
