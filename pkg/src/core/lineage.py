"""
Lineage tags: where every atom of a resolvent comes from
"""
from dataclasses import dataclass, field
from typing import AbstractSet, Iterator, Optional, Tuple

INITIAL = 'initial'
STACK = 'stack'
QUEUE = 'queue'
INNER = 'inner'


@dataclass(frozen=True)
class LineageTag:
    """Origin of an atom: initial goal position, or (step, clause body position)"""
    step: Optional[int]
    position: int
    mode: str = INITIAL
    parent: Optional['LineageTag'] = field(default=None, compare=False, repr=False)

    @property
    def is_initial(self) -> bool:
        return self.step is None

    @property
    def key(self) -> Tuple[int, int]:
        return (-1 if self.step is None else self.step), self.position

    def ancestors(self) -> Iterator['LineageTag']:
        current = self.parent
        while current is not None:
            yield current
            current = current.parent

    def root(self) -> 'LineageTag':
        current = self
        while current.parent is not None:
            current = current.parent
        return current

    def descends_from(self, tags: AbstractSet['LineageTag']) -> bool:
        """True when this tag or one of its ancestors is in tags"""
        if self in tags:
            return True
        return any(ancestor in tags for ancestor in self.ancestors())

    def stack_descends_from(self, tags: AbstractSet['LineageTag']) -> bool:
        """True when the chain up to a member of tags only crosses stack placements"""
        current = self
        while current not in tags:
            if current.mode != STACK or current.parent is None:
                return False
            current = current.parent
        return True

    def __str__(self):
        if self.step is None:
            return f"g{self.position}"
        return f"s{self.step}.{self.position}"


def initial_tag(position: int) -> LineageTag:
    return LineageTag(None, position, INITIAL)


def step_tag(step: int, position: int, mode: str, parent: Optional[LineageTag]) -> LineageTag:
    return LineageTag(step, position, mode, parent)
