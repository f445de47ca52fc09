"""
Random programs, goals, substitutions and shiftings for the property lab
"""
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from src.core.lineage import initial_tag
from src.core.priority import PriorityAtom, PriorityGoal, Shifting, allocate_between
from src.core.terms import Atom, Clause, Renaming, Struct, Substitution, Term, Var, ordered_vars
from src.engine.scheduling import StackQueueSplit
from src.parsers.program_parser import ProgramFile

FILLER = 'e'


@dataclass(frozen=True)
class Vocabulary:
    """Function-free signature the generators draw from"""
    predicates: Tuple[Tuple[str, int], ...] = (('p', 2), ('q', 1), ('r', 2), ('s', 0))
    constants: Tuple[str, ...] = ('a', 'b', 'c')
    variables: Tuple[str, ...] = ('x', 'y', 'z', 'w')
    max_goal: int = 5
    max_body: int = 3
    ground: bool = False

    def arity(self, predicate: str) -> int:
        return dict(self.predicates).get(predicate, 0)


DEFAULT_VOCABULARY = Vocabulary()
GROUND_VOCABULARY = Vocabulary(predicates=(('p', 0), ('q', 1), ('r', 0), ('s', 1)),
                               constants=('a', 'b'), variables=(), ground=True)


def random_term(rng: random.Random, vocab: Vocabulary, variables: Sequence[str] = None) -> Term:
    variables = vocab.variables if variables is None else variables
    if vocab.ground or not variables or rng.random() < 0.3:
        return Struct(rng.choice(vocab.constants))
    return Var(rng.choice(list(variables)))


def random_atom(rng: random.Random, vocab: Vocabulary, predicate: Optional[str] = None,
                variables: Sequence[str] = None) -> Atom:
    if predicate is None:
        predicate = rng.choice([name for name, _ in vocab.predicates])
    arity = vocab.arity(predicate)
    return Atom(predicate, tuple(random_term(rng, vocab, variables) for _ in range(arity)))


def random_atoms(rng: random.Random, vocab: Vocabulary, length: int,
                 variables: Sequence[str] = None) -> List[Atom]:
    return [random_atom(rng, vocab, variables=variables) for _ in range(length)]


def random_priorities(rng: random.Random, count: int) -> List[Fraction]:
    """count strictly increasing positive priorities, not always integers"""
    values = sorted(rng.sample(range(1, 8 * count + 8), count))
    denominator = rng.choice([1, 1, 2, 4])
    return [Fraction(value, denominator) for value in values]


def random_goal(rng: random.Random, vocab: Vocabulary = DEFAULT_VOCABULARY,
                length: Optional[int] = None, first_tag: int = 0) -> PriorityGoal:
    length = rng.randint(1, vocab.max_goal) if length is None else length
    atoms = random_atoms(rng, vocab, length)
    priorities = random_priorities(rng, length)
    return PriorityGoal(PriorityAtom(atom, priority, initial_tag(first_tag + i))
                        for i, (atom, priority) in enumerate(zip(atoms, priorities)))


def random_clause(rng: random.Random, vocab: Vocabulary, label: str,
                  head_predicate: Optional[str] = None) -> Clause:
    head = random_atom(rng, vocab, head_predicate)
    size = rng.randint(0, vocab.max_body)
    body = tuple(random_atoms(rng, vocab, size))
    split = rng.randint(0, size)
    return Clause(head, body[:split], body[split:], label)


def random_program(rng: random.Random, vocab: Vocabulary = DEFAULT_VOCABULARY,
                   size: Optional[int] = None, filler: bool = True) -> ProgramFile:
    """Random clauses c1..cn plus a fact for the filler predicate used by contexts"""
    size = rng.randint(1, 4) if size is None else size
    clauses = [random_clause(rng, vocab, f"c{i + 1}") for i in range(size)]
    if filler:
        clauses.append(Clause(Atom(FILLER), (), (), f"c{size + 1}"))
    return ProgramFile(clauses, source='<random>')


def filler_atom() -> Atom:
    return Atom(FILLER)


def random_substitution(rng: random.Random, vocab: Vocabulary, names: Iterable[str]) -> Substitution:
    """Random idempotent instantiation of some of the given variables"""
    names = sorted(names)
    bound = [name for name in names if rng.random() < 0.5]
    free = [name for name in names if name not in bound]
    bindings: Dict[str, Term] = {}
    for name in bound:
        if free and rng.random() < 0.4:
            bindings[name] = Var(rng.choice(free))
        else:
            bindings[name] = Struct(rng.choice(vocab.constants))
    return Substitution(bindings)


def random_renaming(rng: random.Random, names: Iterable[str], avoid: Iterable[str] = ()) -> Renaming:
    """Injective renaming onto names of the form x7, y12"""
    taken = set(avoid) | set(names)
    mapping = {}
    for name in sorted(names):
        while True:
            candidate = f"{rng.choice('xyzw')}{rng.randint(1, 99)}"
            if candidate not in taken:
                break
        taken.add(candidate)
        mapping[name] = candidate
    return Renaming(mapping)


def random_shifting(rng: random.Random, priorities: Sequence[Fraction]) -> Shifting:
    targets = random_priorities(rng, len(priorities))
    return Shifting(dict(zip(sorted(priorities), targets)))


def random_interleaving(rng: random.Random, priorities: Sequence[Fraction], count: int,
                        after: Optional[Fraction] = None) -> List[Fraction]:
    """count new priorities scattered among the gaps of priorities strictly above after"""
    existing = sorted(p for p in priorities if after is None or p > after)
    bounds = ([after] if after is not None else [None]) + existing
    slots = [(bounds[i], existing[i] if i < len(existing) else None) for i in range(len(bounds))]
    chosen: Dict[int, int] = {}
    for _ in range(count):
        slot = rng.randrange(len(slots))
        chosen[slot] = chosen.get(slot, 0) + 1
    values: List[Fraction] = []
    for slot, number in sorted(chosen.items()):
        low, high = slots[slot]
        if low is None and high is None:
            low = Fraction(0)
        values.extend(allocate_between(low, high, number))
    return sorted(values)


def random_context(rng: random.Random, vocab: Vocabulary, goal: PriorityGoal, count: int,
                   after: Optional[Fraction] = None, filler: bool = True) -> PriorityGoal:
    """Extra atoms interleaved with goal above after, tagged past the goal's positions"""
    priorities = random_interleaving(rng, goal.priorities(), count, after)
    first = len(goal)
    atoms = []
    for i, priority in enumerate(priorities):
        atom = filler_atom() if filler and rng.random() < 0.5 else random_atom(rng, vocab)
        atoms.append(PriorityAtom(atom, priority, initial_tag(first + i)))
    return PriorityGoal(atoms)


def random_split(rng: random.Random, program: ProgramFile) -> StackQueueSplit:
    """Random per-clause stack/queue split"""
    return StackQueueSplit('clause', {clause.label: rng.randint(0, len(clause.body)) for clause in program})


def generalised_clause(rng: random.Random, atom: Atom, vocab: Vocabulary, label: str) -> Clause:
    """Clause whose head generalises atom, so that it applies to atom and its instances"""
    names = [f"{vocab.variables[i % len(vocab.variables)] if vocab.variables else 'x'}{i}"
             for i in range(atom.arity)]
    head = Atom(atom.predicate, tuple(Var(name) for name in names))
    size = rng.randint(0, vocab.max_body)
    body = tuple(random_atom(rng, vocab, variables=names or None) for _ in range(size))
    if vocab.ground:
        head = atom
    split = rng.randint(0, size)
    return Clause(head, body[:split], body[split:], label)


def goal_variables(goal: PriorityGoal) -> List[str]:
    return ordered_vars(goal.sequence())
