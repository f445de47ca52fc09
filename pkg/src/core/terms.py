"""
First-order syntax for definite programs
Terms, atoms, clauses, substitutions, renamings and fresh variable names
"""
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from src.core.errors import TermError

# Variables: uppercase or underscore initial, or u..z optionally followed by digits (x, z1, z_1, v12)
VARIABLE_PATTERN = re.compile(r'^(?:[A-Z_][A-Za-z0-9_]*|[u-z](?:_?[0-9]+)?)$')
SYMBOL_PATTERN = re.compile(r'^[a-z][A-Za-z0-9_]*$')
FRESH_PATTERN = re.compile(r'^v([0-9]+)$')


def is_variable_name(name: str) -> bool:
    return bool(VARIABLE_PATTERN.match(name))


def is_symbol_name(name: str) -> bool:
    return bool(SYMBOL_PATTERN.match(name)) and not is_variable_name(name)


@dataclass(frozen=True)
class Var:
    """Logic variable"""
    name: str

    def __post_init__(self):
        if not is_variable_name(self.name):
            raise TermError(f"'{self.name}' is not a variable name")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Struct:
    """Compound term; constants are 0-ary compounds"""
    functor: str
    args: Tuple['Term', ...] = ()

    def __post_init__(self):
        if not is_symbol_name(self.functor):
            raise TermError(f"'{self.functor}' is not a functor name")

    def __str__(self):
        if not self.args:
            return self.functor
        return f"{self.functor}({','.join(str(arg) for arg in self.args)})"


Term = Union[Var, Struct]


@dataclass(frozen=True)
class Atom:
    """Atomic formula p(t1,...,tn)"""
    predicate: str
    args: Tuple[Term, ...] = ()

    def __post_init__(self):
        if not is_symbol_name(self.predicate):
            raise TermError(f"'{self.predicate}' is not a predicate name")

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def signature(self) -> Tuple[str, int]:
        return self.predicate, len(self.args)

    def __str__(self):
        if not self.args:
            return self.predicate
        return f"{self.predicate}({','.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True)
class Clause:
    """Definite clause head <- stack_body | queue_body"""
    head: Atom
    stack_body: Tuple[Atom, ...] = ()
    queue_body: Tuple[Atom, ...] = ()
    label: str = ''

    @property
    def body(self) -> Tuple[Atom, ...]:
        return self.stack_body + self.queue_body

    @property
    def split(self) -> int:
        return len(self.stack_body)

    @property
    def is_fact(self) -> bool:
        return not self.stack_body and not self.queue_body

    def with_split(self, index: int) -> 'Clause':
        """Same clause with the body cut into stack and queue parts at index"""
        body = self.body
        index = max(0, min(index, len(body)))
        return Clause(self.head, body[:index], body[index:], self.label)

    def __str__(self):
        prefix = f"{self.label}: " if self.label else ''
        if self.is_fact:
            return f"{prefix}{self.head} <-."
        stack = ', '.join(str(atom) for atom in self.stack_body)
        if not self.queue_body:
            return f"{prefix}{self.head} <- {stack}."
        queue = ', '.join(str(atom) for atom in self.queue_body)
        if not self.stack_body:
            return f"{prefix}{self.head} <- | {queue}."
        return f"{prefix}{self.head} <- {stack} | {queue}."


def _collect(obj, seen: Dict[str, None]):
    if isinstance(obj, Var):
        seen.setdefault(obj.name, None)
    elif isinstance(obj, (Struct, Atom)):
        for arg in obj.args:
            _collect(arg, seen)
    elif isinstance(obj, Clause):
        _collect(obj.head, seen)
        for atom in obj.body:
            _collect(atom, seen)
    elif hasattr(obj, 'atom'):
        _collect(obj.atom, seen)
    else:
        for item in obj:
            _collect(item, seen)


def ordered_vars(obj) -> List[str]:
    """Variable names of a term, atom, clause or sequence in order of first occurrence"""
    seen: Dict[str, None] = {}
    _collect(obj, seen)
    return list(seen)


def vars_of(obj) -> Set[str]:
    """var(E)"""
    return set(ordered_vars(obj))


def has_function_symbols(obj) -> bool:
    """True when some argument of an atom is a compound of arity > 0"""
    def nested(term):
        return isinstance(term, Struct) and bool(term.args)
    if isinstance(obj, Atom):
        return any(nested(arg) for arg in obj.args)
    if isinstance(obj, Clause):
        return any(has_function_symbols(atom) for atom in (obj.head,) + obj.body)
    return any(has_function_symbols(item) for item in obj)


class Substitution:
    """Finite map from variable names to terms; bindings x/x are never stored"""

    __slots__ = ('_bindings',)

    def __init__(self, bindings: Optional[Mapping[str, Term]] = None):
        clean: Dict[str, Term] = {}
        for name, term in (bindings or {}).items():
            if isinstance(term, Var) and term.name == name:
                continue
            clean[name] = term
        self._bindings = clean

    def __getitem__(self, name: str) -> Term:
        return self._bindings[name]

    def get(self, name: str, default=None):
        return self._bindings.get(name, default)

    def __contains__(self, name) -> bool:
        return name in self._bindings

    def __iter__(self) -> Iterator[str]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __bool__(self) -> bool:
        return bool(self._bindings)

    def items(self):
        return self._bindings.items()

    def as_dict(self) -> Dict[str, Term]:
        return dict(self._bindings)

    def domain(self) -> Set[str]:
        return set(self._bindings)

    def range_vars(self) -> Set[str]:
        return vars_of(self._bindings.values())

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self._bindings == other._bindings

    def __hash__(self):
        return hash(frozenset(self._bindings.items()))

    def apply_term(self, term: Term) -> Term:
        if isinstance(term, Var):
            return self._bindings.get(term.name, term)
        if not term.args or not self._bindings:
            return term
        return Struct(term.functor, tuple(self.apply_term(arg) for arg in term.args))

    def apply_atom(self, atom: Atom) -> Atom:
        if not atom.args or not self._bindings:
            return atom
        return Atom(atom.predicate, tuple(self.apply_term(arg) for arg in atom.args))

    def apply(self, obj):
        """Simultaneous replacement of bound variables in a term, atom, clause or goal"""
        if isinstance(obj, (Var, Struct)):
            return self.apply_term(obj)
        if isinstance(obj, Atom):
            return self.apply_atom(obj)
        if isinstance(obj, Clause):
            return Clause(self.apply_atom(obj.head),
                          tuple(self.apply_atom(a) for a in obj.stack_body),
                          tuple(self.apply_atom(a) for a in obj.queue_body),
                          obj.label)
        if hasattr(obj, 'apply'):
            return obj.apply(self)
        return tuple(self.apply(item) for item in obj)

    def compose(self, other: 'Substitution') -> 'Substitution':
        """self then other: E(self.compose(other)) = (E self) other"""
        bindings = {name: other.apply_term(term) for name, term in self._bindings.items()}
        for name, term in other.items():
            if name not in self._bindings:
                bindings[name] = term
        return Substitution(bindings)

    def restrict(self, names: Iterable[str]) -> 'Substitution':
        keep = set(names)
        return Substitution({n: t for n, t in self._bindings.items() if n in keep})

    def is_idempotent(self) -> bool:
        return not (self.domain() & self.range_vars())

    def is_renaming(self) -> bool:
        targets = list(self._bindings.values())
        if not all(isinstance(t, Var) for t in targets):
            return False
        names = [t.name for t in targets]
        return len(set(names)) == len(names)

    def __str__(self):
        inner = ', '.join(f"{name}/{self._bindings[name]}" for name in sorted(self._bindings))
        return '{' + inner + '}'

    def __repr__(self):
        return f"Substitution({self})"


class Renaming(Substitution):
    """Injective variable to variable substitution"""

    __slots__ = ()

    def __init__(self, bindings: Optional[Mapping[str, Term]] = None):
        converted = {}
        for name, target in (bindings or {}).items():
            converted[name] = Var(target) if isinstance(target, str) else target
        super().__init__(converted)
        if not self.is_renaming():
            raise TermError(f"{self} is not a renaming")

    def inverse(self) -> 'Renaming':
        forward = {name: term.name for name, term in self.items()}
        return Renaming({target: name for name, target in forward.items()})

    def __repr__(self):
        return f"Renaming({self})"


class FreshNames:
    """Monotone source of fresh variable names v1, v2, ... for one derivation"""

    def __init__(self, avoid: Iterable[str] = (), start: int = 0):
        self._counter = start
        self._avoid = set(avoid)

    @property
    def counter(self) -> int:
        return self._counter

    def reserve(self, names: Iterable[str]):
        self._avoid.update(names)

    def next_name(self, avoid: Iterable[str] = ()) -> str:
        extra = set(avoid)
        while True:
            self._counter += 1
            name = f"v{self._counter}"
            if name not in self._avoid and name not in extra:
                return name

    def fork(self) -> 'FreshNames':
        """Branch local copy continuing from the same counter"""
        return FreshNames(self._avoid, self._counter)


def rename_apart(clause: Clause, avoid: Iterable[str] = (),
                 fresh: Optional[FreshNames] = None) -> Tuple[Clause, Renaming]:
    """Variant of clause whose variables are disjoint from avoid"""
    avoid = set(avoid)
    if fresh is None:
        fresh = FreshNames(avoid)
    names = ordered_vars(clause)
    if not names:
        return clause, Renaming()
    mapping = {name: Var(fresh.next_name(avoid)) for name in names}
    renaming = Renaming(mapping)
    return renaming.apply(clause), renaming


def atoms_vars(atoms: Sequence[Atom]) -> Set[str]:
    return vars_of(list(atoms))
