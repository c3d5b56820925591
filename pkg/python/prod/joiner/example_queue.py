from abc import *
from collections import deque
from pathlib import Path
from typing import List

from .joined_example import JoinedExample
from .tools.stream_records import StreamRecords


class ExampleQueue(ABC):

    """Append-only hand-off of joined examples from the joiner to training."""

    @abstractmethod
    def put(self, example: JoinedExample):
        pass

    @abstractmethod
    def drain(self) -> List[JoinedExample]:
        """Every example put since the last drain, in order."""
        pass

    @abstractmethod
    def __len__(self) -> int:
        pass


class MemoryExampleQueue(ExampleQueue):

    def __init__(self, capacity: int = 0):
        """
        :param capacity:
            Maximum pending examples, 0 for unbounded
        """
        self.__capacity = capacity
        self.__items = deque()

    def put(self, example: JoinedExample):
        if self.__capacity and len(self.__items) >= self.__capacity:
            raise OverflowError(f"Example queue is full at {self.__capacity} examples")
        self.__items.append(example)

    def drain(self) -> List[JoinedExample]:
        items = list(self.__items)
        self.__items.clear()
        return items

    def __len__(self) -> int:
        return len(self.__items)


class FileExampleQueue(ExampleQueue):

    """Examples as `E` records in a text file, read back from a cursor."""

    def __init__(self, path: str | Path):
        self.__path = Path(path)
        self.__path.parent.mkdir(parents=True, exist_ok=True)
        self.__path.touch()
        self.__cursor = self.__path.stat().st_size
        self.__pending = 0
        self.__records = StreamRecords()

    def get_path(self) -> Path:
        return self.__path

    def put(self, example: JoinedExample):
        with open(self.__path, "at", encoding="utf-8") as f:
            f.write(self.__records.format_example(example) + "\n")
        self.__pending += 1

    def drain(self) -> List[JoinedExample]:
        with open(self.__path, "rt", encoding="utf-8") as f:
            f.seek(self.__cursor)
            lines = f.readlines()
            self.__cursor = f.tell()
        self.__pending = 0
        return [self.__records.parse(line) for line in lines if line.strip()]

    def __len__(self) -> int:
        return self.__pending
