"""
Unification, matching, variance and list subsumption
"""
from collections import deque
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.core.terms import FRESH_PATTERN, Atom, Renaming, Substitution, Term, Var


def variable_rank(name: str) -> Tuple[int, int, str]:
    """Elimination order: user variables before fresh v<N> ones, fresh ones by counter"""
    fresh = FRESH_PATTERN.match(name)
    if fresh:
        return 1, int(fresh.group(1)), name
    return 0, 0, name


def occurs(name: str, term: Term) -> bool:
    if isinstance(term, Var):
        return term.name == name
    return any(occurs(name, arg) for arg in term.args)


def unify_terms(equations: Sequence[Tuple[Term, Term]],
                occurs_check: bool = True) -> Optional[Substitution]:
    """Martelli-Montanari solved form of a set of term equations"""
    solved: Dict[str, Term] = {}
    pending = deque(equations)

    def bind(name: str, term: Term):
        single = Substitution({name: term})
        for key in list(solved):
            solved[key] = single.apply_term(solved[key])
        solved[name] = term

    while pending:
        left, right = pending.popleft()
        current = Substitution(solved)
        left, right = current.apply_term(left), current.apply_term(right)
        if left == right:
            continue
        if isinstance(left, Var) and isinstance(right, Var):
            # the later variable in elimination order is the one bound
            if variable_rank(left.name) < variable_rank(right.name):
                left, right = right, left
            bind(left.name, right)
        elif isinstance(left, Var):
            if occurs_check and occurs(left.name, right):
                return None
            bind(left.name, right)
        elif isinstance(right, Var):
            if occurs_check and occurs(right.name, left):
                return None
            bind(right.name, left)
        else:
            if left.functor != right.functor or len(left.args) != len(right.args):
                return None
            pending.extendleft(reversed(list(zip(left.args, right.args))))
    return Substitution(solved)


def mgu(a: Atom, b: Atom, occurs_check: bool = True) -> Optional[Substitution]:
    """Idempotent and relevant most general unifier of two atoms, or None"""
    if a.predicate != b.predicate or a.arity != b.arity:
        return None
    return unify_terms(list(zip(a.args, b.args)), occurs_check)


def _match_term(pattern: Term, target: Term, bindings: Dict[str, Term],
                protected: Set[str]) -> bool:
    if isinstance(pattern, Var):
        name = pattern.name
        if name in protected:
            return target == pattern
        bound = bindings.get(name)
        if bound is None:
            bindings[name] = target
            return True
        return bound == target
    if isinstance(target, Var):
        return False
    if pattern.functor != target.functor or len(pattern.args) != len(target.args):
        return False
    return all(_match_term(p, t, bindings, protected) for p, t in zip(pattern.args, target.args))


def match_atom(pattern: Atom, target: Atom, bindings: Optional[Dict[str, Term]] = None,
               protected: Set[str] = frozenset()) -> Optional[Dict[str, Term]]:
    """One way matching: extend bindings so that pattern under them equals target

    Variables of the target are treated as constants; protected pattern
    variables may only stand for themselves.
    """
    if pattern.predicate != target.predicate or pattern.arity != target.arity:
        return None
    extended = dict(bindings or {})
    for p, t in zip(pattern.args, target.args):
        if not _match_term(p, t, extended, protected):
            return None
    return extended


def match_sequence(patterns: Sequence[Atom], targets: Sequence[Atom],
                   protected: Set[str] = frozenset()) -> Optional[Substitution]:
    """Position-wise matcher of two equally long atom sequences"""
    if len(patterns) != len(targets):
        return None
    bindings: Dict[str, Term] = {}
    for pattern, target in zip(patterns, targets):
        bindings = match_atom(pattern, target, bindings, protected)
        if bindings is None:
            return None
    return Substitution(bindings)


def _canonical_term(term: Term, numbering: Dict[str, int]):
    if isinstance(term, Var):
        if term.name not in numbering:
            numbering[term.name] = len(numbering)
        return ('#', numbering[term.name])
    return (term.functor, tuple(_canonical_term(arg, numbering) for arg in term.args))


def canonical_form(atoms: Sequence[Atom]) -> Tuple[tuple, List[str]]:
    """Goal with variables numbered by first occurrence, plus the numbered variables"""
    numbering: Dict[str, int] = {}
    shape = tuple((atom.predicate, tuple(_canonical_term(arg, numbering) for arg in atom.args))
                  for atom in atoms)
    return shape, list(numbering)


def variant_of(first: Sequence[Atom], second: Sequence[Atom]) -> Optional[Renaming]:
    """Renaming tau with first tau = second as lists, decided by joint canonical numbering"""
    if len(first) != len(second):
        return None
    shape_a, names_a = canonical_form(first)
    shape_b, names_b = canonical_form(second)
    if shape_a != shape_b:
        return None
    return Renaming(dict(zip(names_a, names_b)))


def subsumes_as_list(general: Sequence[Atom], specific: Sequence[Atom]) -> Optional[Substitution]:
    """lambda with general lambda an order preserving sublist of specific"""
    general, specific = list(general), list(specific)

    def search(i: int, j: int, bindings: Dict[str, Term]) -> Optional[Dict[str, Term]]:
        if i == len(general):
            return bindings
        for k in range(j, len(specific) - (len(general) - i) + 1):
            extended = match_atom(general[i], specific[k], bindings)
            if extended is None:
                continue
            found = search(i + 1, k + 1, extended)
            if found is not None:
                return found
        return None

    result = search(0, 0, {})
    return None if result is None else Substitution(result)


def is_sublist(shorter: Sequence, longer: Sequence) -> bool:
    """Order preserving sublist test (the subset-as-list relation)"""
    it = iter(longer)
    return all(any(item == candidate for candidate in it) for item in shorter)
