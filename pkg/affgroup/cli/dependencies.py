"""Configuration loading and error mapping for the command line."""
import json
import pathlib
import typing

import pydantic

from ..errors import AffGroupError, ChartMismatch, InvalidChartPoint, ShapeMismatch, SingularMatrix
from ..models.config import RunConfig


__all__ = [
    "EXIT_OK",
    "EXIT_ERROR",
    "EXIT_USAGE",
    "EXIT_CRITERION",
    "EXIT_SHAPE",
    "EXIT_CHART",
    "EXIT_SINGULAR",
    "parse_value",
    "read_config_file",
    "load_config",
    "exit_code",
]


EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
"""I/O, configuration and argument errors."""
EXIT_CRITERION = 3
"""A criterion was not met: invariance gap over threshold, non-decreasing study, overlapping corpus."""
EXIT_SHAPE = 4
EXIT_CHART = 5
EXIT_SINGULAR = 6


def parse_value(raw: str) -> typing.Any:
    """JSON scalars and lists, bare comma-separated lists, or the string itself."""
    raw = raw.strip()
    try:
        return json.loads(raw)
    except ValueError:
        pass
    if "," in raw:
        return [parse_value(item) for item in raw.split(",")]
    return raw


def _assign(data: typing.Dict[str, typing.Any], key: str, value: typing.Any) -> None:
    *parents, leaf = key.split(".")
    node = data
    for part in parents:
        child = node.get(part)
        if not isinstance(child, dict):
            # Unknown sections are left to the model to reject.
            child = node[part] = {}
        node = child
    node[leaf.replace("-", "_")] = value


def read_config_file(path: typing.Union[str, pathlib.Path]) -> typing.Dict[str, typing.Any]:
    """Read `key=value` lines; `#` starts a comment and blank lines are skipped.

    Raises:
        OSError: if the file cannot be read.
        ValueError: if a line has no `=`.
    """
    entries = {}
    for number, line in enumerate(pathlib.Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{number}: expected key=value, got {line!r}.")
        key, raw = line.split("=", 1)
        entries[key.strip()] = parse_value(raw)
    return entries


def load_config(
    path: typing.Optional[typing.Union[str, pathlib.Path]] = None,
    overrides: typing.Optional[typing.Mapping[str, typing.Any]] = None,
) -> RunConfig:
    """Defaults, then the config file, then flag overrides; dotted keys address nested models.

    Args:
        path (typing.Optional[typing.Union[str, pathlib.Path]]): `key=value` file.
        overrides (typing.Optional[typing.Mapping[str, typing.Any]]): Values set by flags.

    Raises:
        pydantic.ValidationError: on unknown keys or invalid values.
    """
    data = RunConfig().model_dump()
    entries = dict(read_config_file(path)) if path else {}
    entries.update(overrides or {})
    for key, value in entries.items():
        _assign(data, key, value)
    return RunConfig.model_validate(data)


def exit_code(error: BaseException, *, shape_code: int = EXIT_SHAPE) -> int:
    """Exit status for an error raised by a command."""
    if isinstance(error, ShapeMismatch):
        return shape_code
    if isinstance(error, ChartMismatch):
        return EXIT_CHART
    if isinstance(error, (SingularMatrix, InvalidChartPoint)):
        return EXIT_SINGULAR
    if isinstance(error, AffGroupError):
        return EXIT_ERROR
    if isinstance(error, (OSError, ValueError, KeyError, pydantic.ValidationError)):
        return EXIT_USAGE
    return EXIT_ERROR
