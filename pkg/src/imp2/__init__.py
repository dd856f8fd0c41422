"""IMP2: a prefix-free reference machine for approximating prefix complexity."""

__version__ = "0.1.0"

from .syntax import parse, to_text
from .enumeration import sentence_rank, sentence_unrank
from .codec import ProgramCode, count_programs, decode_program, encode_program
from .interpreter import ExecOutcome, Status, execute

__all__ = [
    "__version__", "parse", "to_text", "sentence_rank", "sentence_unrank",
    "ProgramCode", "count_programs", "decode_program", "encode_program",
    "ExecOutcome", "Status", "execute",
]
