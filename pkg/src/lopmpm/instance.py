"""LOP instances: the weight matrix, LOLIB text I/O and a seeded generator.

A LOLIB file is an optional name line followed by the dimension ``n`` and
``n * n`` whitespace-separated integers. Line breaks inside the matrix carry
no meaning, so both the one-row-per-line layout and free-flowing token
streams are accepted.

>>> inst = parse_instance("3\\n0 1 2\\n3 0 4\\n5 6 0\\n", name="tiny3")
>>> inst.n
3
>>> inst.weights.tolist()
[[0, 1, 2], [3, 0, 4], [5, 6, 0]]
>>> print(write_instance(inst), end="")
tiny3
3
0 1 2
3 0 4
5 6 0
"""

from __future__ import annotations

import hashlib
import io
import os
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import IO, Union

import numpy as np

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Source = Union[str, bytes, IO[str], IO[bytes]]


class InstanceFormatError(ValueError):
    """Raised when instance text does not follow the LOLIB layout."""


@dataclass(frozen=True, eq=False)
class LopInstance:
    """An ``n x n`` integer weight matrix plus a label.

    The diagonal is kept verbatim so that files round-trip exactly, but it is
    never read by any objective computation.
    """

    name: str
    weights: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.int64, copy=True)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @cached_property
    def skew(self) -> np.ndarray:
        """``skew[x, y] = C[y, x] - C[x, y]``: gain of putting ``y`` before ``x``."""
        s = np.ascontiguousarray(self.weights.T - self.weights)
        s.setflags(write=False)
        return s

    def digest(self) -> str:
        """Short content hash of ``(n, weights)``; the name is not included."""
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(np.ascontiguousarray(self.weights, dtype="<i8").tobytes())
        return h.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, LopInstance):
            return NotImplemented
        return self.name == other.name and np.array_equal(self.weights, other.weights)

    def __hash__(self):
        return hash((self.name, self.digest()))

    def __repr__(self):
        return f"LopInstance(name={self.name!r}, n={self.n})"


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    weight_low: int = 0
    weight_high: int = 100
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.weight_low > self.weight_high:
            raise ValueError(
                f"weight_low ({self.weight_low}) exceeds weight_high ({self.weight_high})"
            )
        if not (INT64_MIN <= self.weight_low and self.weight_high <= INT64_MAX):
            raise ValueError("weight bounds must fit in a signed 64-bit integer")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def _read_text(source: Source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def _is_name_line(line: str) -> bool:
    stripped = line.lstrip()
    return bool(stripped) and not (stripped[0].isdigit() or stripped[0] == "-")


def _to_int(token: str, what: str) -> int:
    try:
        value = int(token, 10)
    except ValueError:
        raise InstanceFormatError(f"expected an integer for {what}, got {token!r}") from None
    if not INT64_MIN <= value <= INT64_MAX:
        raise InstanceFormatError(f"{what} value {token} overflows a signed 64-bit integer")
    return value


def parse_instance(source: Source, name: str = "") -> LopInstance:
    """Parse LOLIB text into a :class:`LopInstance`.

    ``source`` may be a string, bytes or a readable stream. ``name`` is the
    fallback label used when the text carries no name line.
    """
    text = _read_text(source)
    lines = text.splitlines()
    start = 0
    while start < len(lines) and not lines[start].strip():
        start += 1
    if start < len(lines) and _is_name_line(lines[start]):
        name = lines[start].strip()
        start += 1
    tokens = "\n".join(lines[start:]).split()
    if not tokens:
        raise InstanceFormatError("missing matrix dimension")
    n = _to_int(tokens[0], "dimension")
    if n <= 0:
        raise InstanceFormatError(f"dimension must be positive, got {n}")
    body = tokens[1:]
    if len(body) != n * n:
        raise InstanceFormatError(
            f"token count mismatch: expected {n * n} matrix entries for n={n}, found {len(body)}"
        )
    values = [_to_int(tok, "matrix entry") for tok in body]
    weights = np.array(values, dtype=np.int64).reshape(n, n)
    return LopInstance(name=name, weights=weights)


def read_instance(path: Union[str, os.PathLike]) -> LopInstance:
    """Load an instance file; the file stem becomes the default name."""
    path = Path(path)
    with open(path, "rb") as fh:
        return parse_instance(fh, name=path.stem)


def write_instance(inst: LopInstance) -> str:
    """Render ``inst`` as LOLIB text.

    The name line is emitted only when it would be recognised as one on
    re-reading; otherwise the name has to be supplied again as the parse label.
    """
    out = io.StringIO()
    name = inst.name
    if name and name == name.strip() and "\n" not in name and _is_name_line(name):
        out.write(name + "\n")
    out.write(f"{inst.n}\n")
    for row in inst.weights:
        out.write(" ".join(str(int(v)) for v in row))
        out.write("\n")
    return out.getvalue()


def save_instance(inst: LopInstance, path: Union[str, os.PathLike]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(write_instance(inst))


def generate_instance(spec: GeneratorSpec) -> LopInstance:
    """Random instance with off-diagonal weights uniform on
    ``[weight_low, weight_high]`` and a zero diagonal. Pure in ``spec``."""
    rng = np.random.default_rng(spec.seed)
    w = rng.integers(spec.weight_low, spec.weight_high, size=(spec.n, spec.n),
                     dtype=np.int64, endpoint=True)
    np.fill_diagonal(w, 0)
    name = spec.name or f"rand_n{spec.n}_s{spec.seed}"
    return LopInstance(name=name, weights=w)
