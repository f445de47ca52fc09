"""
Bounded derivation trees
Every clause choice (and, in list mode with the 'all' rule, every selection) below a goal
"""
from collections import Counter, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Set

from src.core.errors import RuleError
from src.core.priority import PriorityGoal
from src.core.terms import FreshNames, Substitution, vars_of
from src.engine.derivation import (DerivationMode, DeriveOptions, Resultant, StepRecord, _reduce,
                                   list_derivation_step, p_derivation_step, tag_initial_goal)
from src.engine.loop_check import PruneWitness, find_witness
from src.engine.reduction import ReductionCertificate
from src.engine.scheduling import ALL_SELECTIONS, IndexSelection, ListSelectionRule
from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('engine.tree')


class NodeStatus(Enum):
    OPEN = 'open'
    REFUTED = 'refuted'
    FAILED = 'failed'
    PRUNED = 'pruned'
    TRUNCATED = 'truncated'


@dataclass
class TreeNode:
    """One resolvent of the tree with the step that produced it"""
    ident: int
    depth: int
    resolvent: PriorityGoal
    reduced: PriorityGoal
    certificate: Optional[ReductionCertificate]
    instantiated_goal: PriorityGoal
    step: Optional[StepRecord] = None
    parent: Optional['TreeNode'] = field(default=None, repr=False)
    children: List['TreeNode'] = field(default_factory=list, repr=False)
    status: NodeStatus = NodeStatus.OPEN
    witness: Optional[PruneWitness] = None
    fresh: Optional[FreshNames] = field(default=None, repr=False)
    used: Set[str] = field(default_factory=set, repr=False)
    theta: Substitution = field(default_factory=Substitution, repr=False)

    @property
    def resultant(self) -> Resultant:
        return Resultant(self.reduced, self.instantiated_goal)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def path(self) -> List['TreeNode']:
        """Nodes from the root down to this node"""
        nodes = []
        current = self
        while current is not None:
            nodes.append(current)
            current = current.parent
        return list(reversed(nodes))

    def label(self) -> str:
        return str(self.reduced) if self.reduced else '[]'


@dataclass
class DerivationTree:
    root: TreeNode
    mode: DerivationMode
    rule_name: str
    depth: int
    budget_exhausted: bool = False

    def nodes(self) -> Iterator[TreeNode]:
        pending = [self.root]
        while pending:
            node = pending.pop()
            yield node
            pending.extend(reversed(node.children))

    def leaves(self) -> List[TreeNode]:
        return [node for node in self.nodes() if node.is_leaf]

    def __len__(self) -> int:
        return sum(1 for _ in self.nodes())

    def is_finite(self) -> bool:
        """No branch was cut by the depth bound or the node budget"""
        if self.budget_exhausted:
            return False
        return all(leaf.status != NodeStatus.TRUNCATED for leaf in self.leaves())

    def all_leaves_failed(self) -> bool:
        return all(leaf.status == NodeStatus.FAILED for leaf in self.leaves())

    def max_depth(self) -> int:
        return max(node.depth for node in self.nodes())

    def refutations(self) -> List[TreeNode]:
        return [leaf for leaf in self.leaves() if leaf.status == NodeStatus.REFUTED]

    def summary(self) -> Dict[str, object]:
        counts = Counter(leaf.status.value for leaf in self.leaves())
        return {
            'nodes': len(self),
            'leaves': dict(sorted(counts.items())),
            'max_depth': self.max_depth(),
            'finite': self.is_finite(),
        }


def _selections(rule, reduced: PriorityGoal) -> List[ListSelectionRule]:
    if rule == ALL_SELECTIONS:
        return [IndexSelection(i) for i in range(len(reduced))]
    return [rule]


def build_tree(program, goal, mode='sld', rule=None, depth: Optional[int] = None,
               loop_check: str = 'off', options: Optional[DeriveOptions] = None,
               node_budget: Optional[int] = None) -> DerivationTree:
    """Tree of all derivations of goal up to depth steps; loop checks cut descendants of pruned nodes"""
    mode = DerivationMode(mode)
    options = options or DeriveOptions.from_config()
    depth = config.get('tree_depth', 10) if depth is None else depth
    node_budget = config.get('node_budget', 1_000_000) if node_budget is None else node_budget
    if depth < 0:
        raise RuleError(f"Tree depth must be non-negative, got {depth}")
    if rule is None:
        raise RuleError("A tree needs a selection rule or positioning policy")
    list_rule = rule == ALL_SELECTIONS or isinstance(rule, ListSelectionRule)
    if mode.is_list_mode != list_rule:
        raise RuleError(f"Rule {rule} does not fit mode {mode.value}")
    reduces = mode.reduces if options.reduce is None else options.reduce
    clauses = list(program)

    initial = tag_initial_goal(goal)
    counter = 0

    def make_node(current: PriorityGoal, node_depth: int, theta: Substitution, fresh: FreshNames,
                  used: Set[str], step=None, parent=None) -> TreeNode:
        nonlocal counter
        instantiated = initial.apply(theta)
        if reduces:
            reduced, certificate = _reduce(current, instantiated.vars(), mode, options)
        else:
            reduced, certificate = current, None
        node = TreeNode(counter, node_depth, current, reduced, certificate, instantiated, step, parent,
                        fresh=fresh, used=used, theta=theta)
        counter += 1
        return node

    root = make_node(initial, 0, Substitution(), FreshNames(initial.vars()), set(initial.vars()))
    tree = DerivationTree(root, mode, str(rule), depth)
    queue = deque([root])
    created = 1
    while queue:
        node = queue.popleft()
        if loop_check != 'off' and node.parent is not None:
            path = node.path()
            witness = find_witness([n.resultant for n in path], len(path) - 1, mode, loop_check)
            if witness is not None:
                node.status, node.witness = NodeStatus.PRUNED, witness
                continue
        if not node.reduced:
            node.status = NodeStatus.REFUTED
            continue
        if node.depth >= depth or tree.budget_exhausted:
            node.status = NodeStatus.TRUNCATED
            continue
        for selection in (_selections(rule, node.reduced) if mode.is_list_mode else [rule]):
            for clause in clauses:
                branch = node.fresh.fork()
                avoid = node.used | node.reduced.vars()
                if mode.is_list_mode:
                    step = list_derivation_step(node.reduced, selection, clause, avoid, branch,
                                                node.depth, options.occurs_check)
                else:
                    step = p_derivation_step(node.reduced, clause, selection, avoid, branch,
                                             node.depth, options.occurs_check)
                if step is None:
                    continue
                if created >= node_budget:
                    if not tree.budget_exhausted:
                        logger.warning("Node budget of %d exhausted; remaining branches truncated",
                                       node_budget)
                    tree.budget_exhausted = True
                    break
                child = make_node(step.resolvent, node.depth + 1, node.theta.compose(step.mgu),
                                  branch, node.used | vars_of(step.renamed), step, node)
                node.children.append(child)
                queue.append(child)
                created += 1
        if not node.children:
            node.status = NodeStatus.TRUNCATED if tree.budget_exhausted else NodeStatus.FAILED
    logger.info("Tree of %d nodes built to depth %d", created, depth)
    return tree
