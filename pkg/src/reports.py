"""
Line-oriented verification reports: CHECK <id> <STATUS> key=value ...
"""

import json
import logging
from dataclasses import dataclass, field
from typing import Any, Iterable, List, Optional, Tuple

from config import LOG_LEVEL

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format='%(asctime)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
INFO = "INFO"


def _format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (tuple, list)):
        text = ",".join(f"({_format_value(v)})" if isinstance(v, (tuple, list)) else _format_value(v)
                        for v in value)
    else:
        text = "none" if value is None else str(value)
    if not text or any(ch.isspace() for ch in text) or '"' in text:
        return json.dumps(text)
    return text


@dataclass(frozen=True)
class ReportLine:
    """One check with its status and key=value details in insertion order."""

    check_id: str
    status: str
    details: Tuple[Tuple[str, Any], ...] = ()

    def render(self) -> str:
        parts = ["CHECK", self.check_id, self.status]
        parts.extend(f"{key}={_format_value(value)}" for key, value in self.details)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()


@dataclass
class Report:
    """Ordered collection of report lines."""

    lines: List[ReportLine] = field(default_factory=list)

    def check(self, check_id: str, passed: bool, witness: Optional[Any] = None, **details: Any) -> bool:
        """
        Record a PASS/FAIL line.

        The witness is the counterexample behind a failure. It is rendered
        last and only on FAIL lines, so passing output does not depend on it.
        """
        items = tuple(details.items())
        if not passed:
            if witness is None:
                logger.warning(f"{check_id} failed without a witness")
            else:
                items += (("witness", witness),)
        self.lines.append(ReportLine(check_id, PASS if passed else FAIL, items))
        return passed

    def info(self, check_id: str, **details: Any) -> None:
        self.lines.append(ReportLine(check_id, INFO, tuple(details.items())))

    def extend(self, lines: Iterable[ReportLine]) -> None:
        self.lines.extend(lines)

    @property
    def failures(self) -> List[ReportLine]:
        return [line for line in self.lines if line.status == FAIL]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def render(self) -> str:
        return "".join(line.render() + "\n" for line in self.lines)
