"""
Trace export for rsld-lab
JSON and text traces of derivations, text and DOT renderings of derivation trees
"""
import json
from typing import Any, Dict, List, Optional

from src.core.priority import PriorityAtom, PriorityGoal, format_priority
from src.engine.derivation import DerivationEntry, DerivationRecord
from src.engine.reduction import ReductionCertificate
from src.engine.tree import DerivationTree, NodeStatus, TreeNode
from src.lab.report import CheckReport

TRACE_VERSION = 1

NODE_STYLES = {
    NodeStatus.REFUTED: 'shape=box, style=bold, color=darkgreen',
    NodeStatus.FAILED: 'shape=box, color=firebrick',
    NodeStatus.PRUNED: 'shape=box, style=dashed, color=darkorange',
    NodeStatus.TRUNCATED: 'shape=box, style=dotted, color=gray40',
    NodeStatus.OPEN: 'shape=box',
}


def atom_to_dict(patom: PriorityAtom) -> Dict[str, str]:
    return {'atom': str(patom.atom), 'priority': format_priority(patom.priority)}


def goal_to_list(goal: PriorityGoal) -> List[str]:
    return [str(pa) for pa in goal]


def certificate_to_dict(certificate: Optional[ReductionCertificate], goal: PriorityGoal) -> Optional[Dict[str, Any]]:
    if certificate is None:
        return None
    atoms = goal.atoms
    return {
        'tau': {name: str(term) for name, term in certificate.tau.items()},
        'eliminated': [str(atoms[i]) for i in certificate.eliminated_indices()],
        'advanced': {str(atoms[keeper]): format_priority(priority)
                     for keeper, priority in certificate.advancement.items()},
    }


def entry_to_dict(entry: DerivationEntry) -> Dict[str, Any]:
    step = entry.step
    return {
        'index': entry.index,
        'resolvent': goal_to_list(entry.resolvent),
        'reduction': certificate_to_dict(entry.certificate, entry.resolvent),
        'reduced': goal_to_list(entry.reduced),
        'resultant': {'reduced': goal_to_list(entry.reduced),
                      'goal': goal_to_list(entry.instantiated_goal)},
        'selected': atom_to_dict(step.selected) if step else None,
        'clause': step.clause.label if step else None,
        'mgu': {name: str(term) for name, term in step.mgu.items()} if step else None,
    }


def record_to_dict(record: DerivationRecord) -> Dict[str, Any]:
    """Serializable form of a derivation; one element of 'steps' per resolvent"""
    witness = record.witness
    return {
        'version': TRACE_VERSION,
        'mode': record.mode.value,
        'rule': record.rule_name,
        'goal': goal_to_list(record.initial_goal),
        'status': record.status.value if record.status else None,
        'length': len(record),
        'template': record.labels(),
        'witness': None if witness is None else {
            'earlier': witness.earlier,
            'later': witness.later,
            'renaming': {name: str(term) for name, term in witness.renaming.items()},
            'shifting': None if witness.shifting is None else
            {format_priority(p): format_priority(q) for p, q in witness.shifting.items()},
            'variant': witness.variant,
        },
        'steps': [entry_to_dict(entry) for entry in record.entries],
    }


def record_to_json(record: DerivationRecord, indent: Optional[int] = 2) -> str:
    return json.dumps(record_to_dict(record), indent=indent)


def _goal_text(goal: PriorityGoal, list_mode: bool) -> str:
    if not goal:
        return '[]'
    if list_mode:
        return ', '.join(str(pa.atom) for pa in goal)
    return str(goal)


def record_to_text(record: DerivationRecord) -> str:
    """Human readable trace: one block per resolvent"""
    list_mode = record.mode.is_list_mode
    lines = [f"% mode {record.mode.value}, rule {record.rule_name}"]
    for entry in record.entries:
        lines.append(f"G{entry.index}: {_goal_text(entry.resolvent, list_mode)}")
        certificate = entry.certificate
        if certificate is not None and not certificate.is_identity:
            lines.append(f"N{entry.index}: {_goal_text(entry.reduced, list_mode)}   tau={certificate.tau}")
        step = entry.step
        if step is not None:
            lines.append(f"  -- {step.clause.label} on {step.selected.atom}  mgu={step.mgu}")
    status = record.status.value if record.status else 'open'
    lines.append(f"% {status} after {len(record)} steps")
    if record.witness is not None:
        lines.append(f"% witness {record.witness}")
    return '\n'.join(lines)


def _node_line(node: TreeNode, list_mode: bool) -> str:
    clause = f"{node.step.clause.label}: " if node.step is not None else ''
    text = f"{'  ' * node.depth}{clause}{_goal_text(node.reduced, list_mode)}"
    if node.status != NodeStatus.OPEN:
        text += f"  [{node.status.value}]"
    if node.witness is not None:
        text += f"  witness {node.witness.indices}"
    return text


def tree_to_text(tree: DerivationTree) -> str:
    list_mode = tree.mode.is_list_mode
    lines = [_node_line(node, list_mode) for node in tree.nodes()]
    summary = tree.summary()
    leaves = ', '.join(f"{status} {count}" for status, count in summary['leaves'].items())
    lines.append(f"% {summary['nodes']} nodes, leaves: {leaves}, "
                 f"{'finite' if summary['finite'] else 'not finite'}")
    return '\n'.join(lines)


def _dot_escape(text: str) -> str:
    return text.replace('\\', '\\\\').replace('"', '\\"')


def tree_to_dot(tree: DerivationTree, name: str = 'derivation_tree') -> str:
    """Graphviz digraph; edges are labelled with clause ids"""
    list_mode = tree.mode.is_list_mode
    lines = [f'digraph {name} {{', '  node [fontname="monospace"];']
    for node in tree.nodes():
        label = _dot_escape(_goal_text(node.reduced, list_mode))
        lines.append(f'  n{node.ident} [label="{label}", {NODE_STYLES[node.status]}];')
        if node.parent is not None:
            lines.append(f'  n{node.parent.ident} -> n{node.ident} [label="{node.step.clause.label}"];')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def report_to_json(reports: List[CheckReport], indent: Optional[int] = 2) -> str:
    return json.dumps([report.to_dict() for report in reports], indent=indent, default=str)
