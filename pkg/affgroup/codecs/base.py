"""Base class of the file codecs."""
import abc
import pathlib
import typing


__all__ = ["Codec", "PathLike"]


T = typing.TypeVar("T")

PathLike = typing.Union[str, pathlib.Path]


class Codec(abc.ABC, typing.Generic[T]):
    """Reads and writes one kind of artifact in one file format."""

    suffixes: typing.Tuple[str, ...]
    """File suffixes the format is recognized by, lower case with the dot."""

    @abc.abstractmethod
    def read(self, path: PathLike) -> T:
        """Read an artifact from a file.

        Args:
            path (PathLike): Path of the file.

        Raises:
            OSError: if the file cannot be read.
            ValueError: if the file is malformed.
        """

    @abc.abstractmethod
    def write(self, value: T, path: PathLike) -> None:
        """Write an artifact to a file, replacing it.

        Args:
            value (T): The artifact.
            path (PathLike): Path of the file.
        """

    def accepts(self, path: PathLike) -> bool:
        """Whether the path has one of the format's suffixes."""
        return pathlib.Path(path).suffix.lower() in self.suffixes
