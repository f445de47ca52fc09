"""
Worked examples shipped under programs/
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from src.core.errors import InvalidInstance
from src.core.priority import PriorityGoal
from src.engine.derivation import DeriveOptions, DerivationRecord, derive
from src.engine.scheduling import rule_from_name
from src.parsers.program_parser import ProgramFile, load_program, parse_goal

PROGRAMS_DIR = Path(__file__).resolve().parent.parent.parent / 'programs'


@dataclass(frozen=True)
class WorkedExample:
    """A program file with the goal, mode and rule it is meant to be run with"""
    name: str
    filename: str
    goal_text: str
    mode: str
    rule_name: str
    description: str = ''
    extra_goals: Dict[str, str] = field(default_factory=dict)

    @property
    def path(self) -> Path:
        return PROGRAMS_DIR / self.filename

    def program(self) -> ProgramFile:
        return load_program(self.path)

    def goal(self, which: Optional[str] = None) -> PriorityGoal:
        text = self.goal_text if which is None else self.extra_goals[which]
        return parse_goal(text, self.program().arities())

    def rule(self, mode: Optional[str] = None):
        mode = mode or self.mode
        return rule_from_name(self.rule_name, mode in ('sld', 'rsld'))

    def run(self, mode: Optional[str] = None, **overrides) -> DerivationRecord:
        mode = mode or self.mode
        options = DeriveOptions.from_config(**overrides)
        return derive(self.program(), self.goal(), mode, self.rule(mode), options)


CATALOGUE: Dict[str, WorkedExample] = {example.name: example for example in [
    WorkedExample('odd-even-loop', 'odd_even_loop.lp', 'q, p(x,x)', 'rsld', 'odd-even',
                  'Reduction makes a terminating selection rule loop'),
    WorkedExample('advancement', 'advancement.lp', 'p, q(a)', 'prsld', 'stack',
                  'Advancement of eliminating atoms keeps the stack rule terminating'),
    WorkedExample('centre-lowering', 'centre_lowering.lp', 's[1], p(a)[2]', 'psld', 'center',
                  'Centre insertion is not specialisation independent',
                  {'specialised': 's[1], p(a)[1.5], r[2]'}),
    WorkedExample('centre-lifting', 'centre_lifting.lp', 'p[1.1], r[1.5], r[1.6], s[2], s[2.5]', 'psld',
                  'center', 'Centre insertion derivations cannot be lifted',
                  {'general': 'p[1], s[2], s[3]'}),
    WorkedExample('pred-special', 'pred_special.lp', 'q(x,x1) | t(x1,x)', 'prsld', 'pred-special:s',
                  'A scheduling rule that is not stack-queue loses termination under reduction'),
    WorkedExample('loop', 'loop.lp', 'p', 'sld', 'leftmost', 'Immediate resultant repetition'),
    WorkedExample('duplication', 'duplication.lp', 'p, q, r, s', 'psld', 'stack',
                  'Ground program for duplication experiments'),
    WorkedExample('paths', 'paths.lp', 't(a,y)', 'prsld', 'stack', 'Function-free reachability'),
    WorkedExample('chain', 'chain.lp', 'p(x), q(x)', 'prsld', 'sq', 'Terminating chain'),
]}


def get_example(name: str) -> WorkedExample:
    try:
        return CATALOGUE[name]
    except KeyError:
        raise InvalidInstance(f"No worked example named '{name}'; known: {', '.join(sorted(CATALOGUE))}")


def sample_programs() -> List[WorkedExample]:
    """Programs whose stack-rule trees are finite, used for embedding and termination runs"""
    return [CATALOGUE[name] for name in ('duplication', 'chain', 'advancement')]
