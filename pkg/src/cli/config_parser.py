"""
Run configuration parsing.

Configs are YAML documents validated strictly against RunConfig. Every
problem is reported at once, each with the line it was found on.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from .models import RunConfig


@dataclass(frozen=True)
class ConfigIssue:
    location: str
    message: str
    line: Optional[int] = None

    def __str__(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        at = f"{self.location}: " if self.location else ""
        return f"{where}{at}{self.message}"


class ConfigError(ValueError):
    """A config that cannot be parsed or fails validation."""

    def __init__(self, issues: Sequence[ConfigIssue]):
        self.issues = list(issues)
        super().__init__("\n".join(str(issue) for issue in self.issues))


# =============================================================================
# Line Lookup
# =============================================================================

def _locate(root: Optional[yaml.Node], loc: Sequence[Union[str, int]]) -> Optional[int]:
    """1-based line of the deepest node reachable along a validation error location."""
    if root is None:
        return None
    node = root
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((value for key, value in node.value if key.value == str(part)), None)
            if match is None:
                # The scenario kind appears in error locations as a union tag, not as a key.
                kind = next((value.value for key, value in node.value if key.value == "kind"), None)
                if kind is not None and part == kind:
                    continue
                break
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and part < len(node.value):
            node = node.value[part]
        else:
            break
    return node.start_mark.line + 1


def _issues_from_validation(error: ValidationError, root: Optional[yaml.Node]) -> List[ConfigIssue]:
    issues = []
    for item in error.errors():
        loc = item["loc"]
        issues.append(
            ConfigIssue(
                location=".".join(str(part) for part in loc),
                message=item["msg"],
                line=_locate(root, loc),
            )
        )
    return issues


# =============================================================================
# Public API
# =============================================================================

def parse_config(text: str) -> RunConfig:
    """Parse and validate a YAML run config, raising ConfigError with every issue found."""
    try:
        data: Any = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark is not None else None
        problem = getattr(e, "problem", None) or str(e)
        raise ConfigError([ConfigIssue("", f"invalid YAML: {problem}", line)]) from e

    if not isinstance(data, dict):
        raise ConfigError([ConfigIssue("", "config must be a mapping with a 'scenarios' list", 1)])

    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_issues_from_validation(e, root)) from e


def load_config(path: Path) -> RunConfig:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError([ConfigIssue(str(path), f"cannot read config: {e.strerror or e}")]) from e
    return parse_config(text)
