"""
JSON-based terminal highlighter for rsld-lab
Compiles the rule files under highlight/ into Pygments lexers
"""
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Type

from pygments import highlight
from pygments.formatters import TerminalFormatter
from pygments.lexer import RegexLexer
from pygments.token import Text, Whitespace, string_to_tokentype

from src.utils.config import config
from src.utils.log import get_logger

logger = get_logger('viewers')

HIGHLIGHT_DIR = Path(__file__).parent / 'highlight'
COLOR_MODES = ('auto', 'always', 'never')


def load_rules(language: str) -> Optional[dict]:
    """Rule file highlight/<language>.json, or None when missing or unreadable"""
    path = HIGHLIGHT_DIR / f'{language}.json'
    if not path.exists():
        logger.warning("Language rules not found: %s", path)
        return None
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except (json.JSONDecodeError, OSError) as e:
        logger.warning("Error loading language rules %s: %s", language, e)
        return None


def build_lexer(language: str, rules_config: dict) -> Type[RegexLexer]:
    """RegexLexer subclass whose root state tries the rules in file order"""
    root = []
    for rule in rules_config.get('rules', []):
        root.append((rule['pattern'], string_to_tokentype(rule.get('token', 'Text'))))
    root.extend([(r'\s+', Whitespace), (r'.', Text)])
    attributes = {
        'name': rules_config.get('name', language),
        'aliases': [language],
        'filenames': [f'*{ext}' for ext in rules_config.get('extensions', [])],
        'tokens': {'root': root},
    }
    return type(f'{language.capitalize()}Lexer', (RegexLexer,), attributes)


class LexerManager:
    """Lexers for the languages found under highlight/"""

    def __init__(self):
        self.language_mappings: Dict[str, str] = {}
        self._lexers: Dict[str, Type[RegexLexer]] = {}
        self.load_language_mappings()

    def load_language_mappings(self):
        for json_file in HIGHLIGHT_DIR.glob('*.json'):
            rules_config = load_rules(json_file.stem)
            if rules_config is None:
                continue
            for ext in rules_config.get('extensions', []):
                self.language_mappings[ext.lower()] = json_file.stem

    def get_lexer(self, language: str) -> Optional[RegexLexer]:
        if language not in self._lexers:
            rules_config = load_rules(language)
            if rules_config is None:
                return None
            self._lexers[language] = build_lexer(language, rules_config)
        return self._lexers[language]()

    def get_lexer_for_file(self, file_path) -> Optional[RegexLexer]:
        language = self.language_mappings.get(Path(file_path).suffix.lower())
        return self.get_lexer(language) if language else None

    def get_supported_languages(self) -> List[str]:
        return sorted(set(self.language_mappings.values()))


lexer_manager = LexerManager()


def use_color(mode: Optional[str] = None, stream=None) -> bool:
    mode = mode or config.get('color', 'auto')
    if mode == 'always':
        return True
    if mode == 'never':
        return False
    stream = stream or sys.stdout
    return hasattr(stream, 'isatty') and stream.isatty()


def highlight_text(text: str, language: str, color: Optional[str] = None, stream=None) -> str:
    """text colourised for a terminal, or unchanged when colour is off"""
    if not use_color(color, stream):
        return text
    lexer = lexer_manager.get_lexer(language)
    if lexer is None:
        return text
    return highlight(text, lexer, TerminalFormatter()).rstrip('\n')
