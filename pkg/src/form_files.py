"""
Reading and writing quadratic-form files.

    field gf2^k | field rational | field tower
    dim n
    term i j <scalar literal>    (1-based, i <= j)

Blank lines and text after '#' are ignored; missing terms are zero.
"""

import logging
import os
from typing import Any, Dict, Tuple

from config import FORMS_DIR, LOG_LEVEL
from src.quadform import QuadraticForm
from src.scalars import parse_field

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)


class FormFileError(ValueError):
    """Malformed form file; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int = 0, source: str = "<text>"):
        self.line_number = line_number
        self.source = source
        super().__init__(f"{source}:{line_number}: {message}")


def parse_form_text(text: str, source: str = "<text>") -> QuadraticForm:
    """
    Parse the contents of a form file.

    Args:
        text: File contents
        source: Name used in error messages

    Returns:
        The quadratic form
    """
    field = None
    dim = None
    terms: Dict[Tuple[int, int], Any] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        directive, _, rest = line.partition(" ")
        rest = rest.strip()
        if directive == "field":
            if field is not None:
                raise FormFileError("duplicate field directive", number, source)
            try:
                field = parse_field(rest)
            except ValueError as e:
                raise FormFileError(str(e), number, source)
        elif directive == "dim":
            if field is None:
                raise FormFileError("dim before field", number, source)
            if dim is not None:
                raise FormFileError("duplicate dim directive", number, source)
            if not rest.isdigit():
                raise FormFileError(f"invalid dimension {rest!r}", number, source)
            dim = int(rest)
        elif directive == "term":
            if dim is None:
                raise FormFileError("term before dim", number, source)
            parts = rest.split(None, 2)
            if len(parts) != 3 or not parts[0].isdigit() or not parts[1].isdigit():
                raise FormFileError(f"expected 'term i j <scalar>', got {line!r}", number, source)
            i, j = int(parts[0]), int(parts[1])
            if not 1 <= i <= j <= dim:
                raise FormFileError(f"term indices must satisfy 1 <= i <= j <= {dim}, got {i} {j}", number, source)
            if (i - 1, j - 1) in terms:
                raise FormFileError(f"duplicate term {i} {j}", number, source)
            try:
                terms[(i - 1, j - 1)] = field.parse(parts[2])
            except (ValueError, ZeroDivisionError) as e:
                raise FormFileError(str(e), number, source)
        else:
            raise FormFileError(f"unknown directive {directive!r}", number, source)
    if field is None or dim is None:
        raise FormFileError("missing field or dim directive", 0, source)
    return QuadraticForm.from_terms(field, dim, terms)


def parse_form_file(path: str) -> QuadraticForm:
    """
    Load a form file. A bare name that does not exist relative to the
    working directory is looked up in FORMS_DIR.

    Args:
        path: Path to the file, or the name of a shipped form

    Returns:
        The quadratic form
    """
    if not os.path.exists(path):
        shipped = os.path.join(FORMS_DIR, path)
        if not os.path.exists(shipped):
            raise FormFileError("file not found", 0, path)
        path = shipped
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    form = parse_form_text(text, source=path)
    logger.info(f"Loaded form of dimension {form.dim} over {form.field.name} from {path}")
    return form


def format_form(q: QuadraticForm) -> str:
    """Serialize a form; parse_form_text(format_form(q)) == q."""
    lines = [f"field {q.field.name}", f"dim {q.dim}"]
    for (i, j), c in q.terms().items():
        lines.append(f"term {i + 1} {j + 1} {q.field.format(c)}")
    return "\n".join(lines) + "\n"


def write_form_file(q: QuadraticForm, path: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(format_form(q))
    logger.info(f"Wrote form of dimension {q.dim} to {path}")
