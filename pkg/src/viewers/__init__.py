# rsld-lab - terminal highlighting
from .lp_highlighter import LexerManager, highlight_text, lexer_manager

__all__ = ['LexerManager', 'highlight_text', 'lexer_manager']
