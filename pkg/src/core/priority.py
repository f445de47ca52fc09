"""
Priority atoms and priority goals over exact rationals
Merging, concatenation, shiftings and p-variants
"""
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple, Union

from src.core.errors import OrderViolation, ParseError, PriorityClash, ShiftingError
from src.core.lineage import LineageTag, initial_tag
from src.core.terms import Atom, Renaming, Substitution, vars_of
from src.core.unify import variant_of

Priority = Fraction
Bound = Optional[Fraction]


def parse_priority(text: Union[str, int, Fraction]) -> Fraction:
    """Exact rational from `n`, `n/d` or a decimal such as `12.5`"""
    try:
        return Fraction(text.strip()) if isinstance(text, str) else Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"Invalid priority '{text}': {e}")


def format_priority(priority: Fraction) -> str:
    return str(priority)


def fresh_between(low: Bound, high: Bound) -> Fraction:
    """Strictly intermediate priority; None stands for an infinite bound"""
    if low is None and high is None:
        return Fraction(0)
    if low is None:
        return high - 1
    if high is None:
        return low + 1
    if not low < high:
        raise OrderViolation(f"No priority strictly between {low} and {high}")
    return (low + high) / 2


@dataclass(frozen=True)
class PriorityAtom:
    """Atom a[p] with its lineage tag"""
    atom: Atom
    priority: Fraction
    tag: Optional[LineageTag] = field(default=None, compare=False)

    def apply(self, theta: Substitution) -> 'PriorityAtom':
        return replace(self, atom=theta.apply_atom(self.atom))

    def with_priority(self, priority: Fraction) -> 'PriorityAtom':
        return replace(self, priority=priority)

    def __str__(self):
        return f"{self.atom}[{format_priority(self.priority)}]"


class PriorityGoal:
    """Finite set of p-atoms with pairwise distinct priorities, iterated in ascending priority"""

    __slots__ = ('_atoms',)

    def __init__(self, atoms: Iterable[PriorityAtom] = ()):
        ordered = sorted(atoms, key=lambda pa: pa.priority)
        for previous, current in zip(ordered, ordered[1:]):
            if previous.priority == current.priority:
                raise PriorityClash(f"Priority {current.priority} used by {previous} and {current}")
        self._atoms: Tuple[PriorityAtom, ...] = tuple(ordered)

    @classmethod
    def from_atoms(cls, atoms: Sequence[Atom], priorities: Optional[Sequence] = None,
                   tagged: bool = True) -> 'PriorityGoal':
        """Goal with default priorities 1..k in textual order, each atom tagged by its position"""
        atoms = list(atoms)
        if priorities is None:
            priorities = range(1, len(atoms) + 1)
        return cls(PriorityAtom(atom, Fraction(priority), initial_tag(i) if tagged else None)
                   for i, (atom, priority) in enumerate(zip(atoms, priorities)))

    @property
    def atoms(self) -> Tuple[PriorityAtom, ...]:
        return self._atoms

    def __iter__(self) -> Iterator[PriorityAtom]:
        return iter(self._atoms)

    def __len__(self) -> int:
        return len(self._atoms)

    def __bool__(self) -> bool:
        return bool(self._atoms)

    def __getitem__(self, index):
        return self._atoms[index]

    def __eq__(self, other):
        if not isinstance(other, PriorityGoal):
            return NotImplemented
        return self._atoms == other._atoms

    def __hash__(self):
        return hash(self._atoms)

    def __add__(self, other: 'PriorityGoal') -> 'PriorityGoal':
        return merge(self, other)

    def __or__(self, other: 'PriorityGoal') -> 'PriorityGoal':
        return concat(self, other)

    def priorities(self) -> Tuple[Fraction, ...]:
        return tuple(pa.priority for pa in self._atoms)

    def sequence(self) -> Tuple[Atom, ...]:
        """Atoms in ascending priority order (the goal read as a list)"""
        return tuple(pa.atom for pa in self._atoms)

    def tags(self) -> Tuple[Optional[LineageTag], ...]:
        return tuple(pa.tag for pa in self._atoms)

    def first(self) -> Optional[PriorityAtom]:
        return self._atoms[0] if self._atoms else None

    def min_priority(self) -> Optional[Fraction]:
        return self._atoms[0].priority if self._atoms else None

    def max_priority(self) -> Optional[Fraction]:
        return self._atoms[-1].priority if self._atoms else None

    def vars(self) -> Set[str]:
        return vars_of(self.sequence())

    def without(self, patom: PriorityAtom) -> 'PriorityGoal':
        return PriorityGoal(pa for pa in self._atoms if pa.priority != patom.priority)

    def apply(self, theta: Substitution) -> 'PriorityGoal':
        if not theta:
            return self
        return PriorityGoal(pa.apply(theta) for pa in self._atoms)

    def shift(self, shifting: 'Shifting') -> 'PriorityGoal':
        return PriorityGoal(pa.with_priority(shifting(pa.priority)) for pa in self._atoms)

    def precedes(self, other: 'PriorityGoal') -> bool:
        """F -| G: every priority of F below every priority of G"""
        if not self._atoms or not other:
            return True
        return self.max_priority() < other.min_priority()

    def restrict(self, tags: Iterable[LineageTag]) -> 'PriorityGoal':
        keep = set(tags)
        return PriorityGoal(pa for pa in self._atoms if pa.tag in keep)

    def index_of_tag(self, tag: LineageTag) -> Optional[int]:
        for index, pa in enumerate(self._atoms):
            if pa.tag == tag:
                return index
        return None

    def renumbered(self, start: int = 1) -> 'PriorityGoal':
        return PriorityGoal(pa.with_priority(Fraction(start + i)) for i, pa in enumerate(self._atoms))

    def __str__(self):
        return ', '.join(str(pa) for pa in self._atoms)

    def __repr__(self):
        return f"PriorityGoal({self})"


def merge(first: PriorityGoal, second: PriorityGoal) -> PriorityGoal:
    """F + G"""
    clash = set(first.priorities()) & set(second.priorities())
    if clash:
        raise PriorityClash(f"Priorities {sorted(clash)} occur in both goals")
    return PriorityGoal(first.atoms + second.atoms)


def concat(first: PriorityGoal, second: PriorityGoal) -> PriorityGoal:
    """F | G, defined when F -| G"""
    if not first.precedes(second):
        raise OrderViolation(f"{first} does not precede {second}")
    return merge(first, second)


class Shifting:
    """Strictly increasing map between finite sets of priorities"""

    __slots__ = ('_map',)

    def __init__(self, mapping: Mapping):
        items = sorted((Fraction(k), Fraction(v)) for k, v in mapping.items())
        for (_, low), (_, high) in zip(items, items[1:]):
            if not low < high:
                raise ShiftingError(f"Shifting is not strictly increasing: {dict(items)}")
        self._map = dict(items)

    @classmethod
    def identity(cls, priorities: Iterable[Fraction]) -> 'Shifting':
        return cls({p: p for p in priorities})

    def support(self) -> Tuple[Fraction, ...]:
        return tuple(self._map)

    def items(self):
        return self._map.items()

    def __call__(self, priority: Fraction) -> Fraction:
        try:
            return self._map[priority]
        except KeyError:
            raise ShiftingError(f"Priority {priority} is outside the shifting support")

    def apply_goal(self, goal: PriorityGoal) -> PriorityGoal:
        return goal.shift(self)

    def compose(self, other: 'Shifting') -> 'Shifting':
        """self then other"""
        return Shifting({p: other(q) for p, q in self._map.items()})

    def inverse(self) -> 'Shifting':
        return Shifting({q: p for p, q in self._map.items()})

    def is_identity(self) -> bool:
        return all(p == q for p, q in self._map.items())

    def __eq__(self, other):
        if not isinstance(other, Shifting):
            return NotImplemented
        return self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __str__(self):
        return '{' + ', '.join(f"{p}->{q}" for p, q in self._map.items()) + '}'

    def __repr__(self):
        return f"Shifting({self})"


def is_strictly_increasing(mapping: Mapping) -> bool:
    items = sorted(mapping.items())
    return all(low < high for (_, low), (_, high) in zip(items, items[1:]))


def find_shifting(first: PriorityGoal, second: PriorityGoal) -> Optional[Shifting]:
    """Shifting pi with first pi = second, when the ordered atom sequences coincide"""
    if len(first) != len(second) or first.sequence() != second.sequence():
        return None
    return Shifting(dict(zip(first.priorities(), second.priorities())))


def p_variant_of(first: PriorityGoal, second: PriorityGoal) -> Optional[Tuple[Renaming, Shifting]]:
    """Renaming and shifting carrying first onto second"""
    renaming = variant_of(first.sequence(), second.sequence())
    if renaming is None:
        return None
    shifting = find_shifting(first.apply(renaming), second)
    if shifting is None:
        return None
    return renaming, shifting


def allocate_below(bound: Bound, count: int) -> List[Fraction]:
    """count increasing priorities below bound, allocated by descending fresh_between calls"""
    values: List[Fraction] = []
    current = bound
    for _ in range(count):
        current = fresh_between(None, current)
        values.append(current)
    return list(reversed(values))


def allocate_above(bound: Bound, count: int) -> List[Fraction]:
    values: List[Fraction] = []
    current = bound
    for _ in range(count):
        current = fresh_between(current, None)
        values.append(current)
    return values


def allocate_between(low: Bound, high: Bound, count: int) -> List[Fraction]:
    """count increasing priorities strictly between low and high by successive midpoints"""
    if high is None:
        return allocate_above(low, count)
    if low is None:
        return allocate_below(high, count)
    values: List[Fraction] = []
    current = low
    for _ in range(count):
        current = fresh_between(current, high)
        values.append(current)
    return values
