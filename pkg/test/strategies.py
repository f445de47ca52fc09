"""
Hypothesis strategies for terms, atoms, goals and shiftings
"""
from fractions import Fraction

from hypothesis import strategies as st

from src.core.priority import PriorityGoal, Shifting
from src.core.terms import Atom, Renaming, Struct, Substitution, Var

VARIABLES = ('x', 'y', 'z', 'w')
CONSTANTS = ('a', 'b')
FUNCTORS = (('f', 1), ('g', 2))
PREDICATES = (('p', 2), ('q', 1), ('r', 0))

variables = st.sampled_from(VARIABLES).map(Var)
constants = st.sampled_from(CONSTANTS).map(Struct)


def _compound(children):
    return st.sampled_from(FUNCTORS).flatmap(
        lambda item: st.tuples(*[children] * item[1]).map(lambda args: Struct(item[0], args)))


terms = st.recursive(st.one_of(variables, constants), _compound, max_leaves=4)
flat_terms = st.one_of(variables, constants)


def atoms(arguments=terms):
    return st.sampled_from(PREDICATES).flatmap(
        lambda item: st.tuples(*[arguments] * item[1]).map(lambda args: Atom(item[0], args)))


def atom_lists(arguments=terms, max_size=5):
    return st.lists(atoms(arguments), min_size=1, max_size=max_size)


@st.composite
def priority_goals(draw, arguments=flat_terms, max_size=5):
    """Goal with distinct, not necessarily integral, priorities"""
    items = draw(atom_lists(arguments, max_size))
    numerators = draw(st.lists(st.integers(-20, 40), min_size=len(items), max_size=len(items), unique=True))
    denominator = draw(st.sampled_from([1, 2, 3, 4]))
    return PriorityGoal.from_atoms(items, [Fraction(n, denominator) for n in numerators])


@st.composite
def shiftings(draw, priorities):
    """Strictly increasing map from priorities to fresh values"""
    support = sorted(priorities)
    steps = draw(st.lists(st.integers(1, 5), min_size=len(support), max_size=len(support)))
    start = Fraction(draw(st.integers(-10, 10)), draw(st.sampled_from([1, 2])))
    images = []
    for step in steps:
        start += step
        images.append(start)
    return Shifting(dict(zip(support, images)))


@st.composite
def substitutions(draw, arguments=terms):
    names = draw(st.lists(st.sampled_from(VARIABLES), unique=True, max_size=len(VARIABLES)))
    return Substitution({name: draw(arguments) for name in names})


@st.composite
def renamings(draw):
    """Permutation of VARIABLES onto primed copies"""
    targets = draw(st.permutations([f"{name}1" for name in VARIABLES]))
    return Renaming(dict(zip(VARIABLES, targets)))
