"""Core containers shared by the simulator, post-processing and test code."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np


@dataclass(frozen=True)
class CountSeries:
    """Ordered radiation counts, one per run, with acquisition metadata.

    ``applied_voltage_V`` and ``distance_cm`` may be ``None`` when the
    data was ingested from a file that does not record them.
    """

    counts: tuple[int, ...]
    preset_time_s: float
    source_label: str = "unknown"
    distance_cm: Optional[float] = None
    applied_voltage_V: Optional[float] = None

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        object.__setattr__(self, "counts", counts)
        if not self.preset_time_s > 0:
            raise ValueError(f"preset_time_s must be positive, got {self.preset_time_s}")
        for i, c in enumerate(counts):
            if c < 0:
                raise ValueError(f"count #{i} is negative ({c})")
        if self.distance_cm is not None and self.distance_cm < 0:
            raise ValueError("distance_cm must be non-negative")
        if self.applied_voltage_V is not None and not self.applied_voltage_V > 0:
            raise ValueError("applied_voltage_V must be positive")

    @property
    def run_count(self) -> int:
        return len(self.counts)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    def __len__(self):
        return len(self.counts)


class BitSequence:
    """Immutable binary sequence stored 8 bits per byte with an explicit length.

    Bit order inside each byte is big-endian (first bit is the MSB), which
    matches :func:`numpy.packbits` defaults.
    """

    __slots__ = ("_packed", "_n")

    def __init__(self, packed: np.ndarray, n_bits: int):
        packed = np.ascontiguousarray(packed, dtype=np.uint8)
        if n_bits < 0 or packed.size != (n_bits + 7) // 8:
            raise ValueError("packed buffer does not match n_bits")
        packed = packed.copy()
        packed.flags.writeable = False
        self._packed = packed
        self._n = int(n_bits)

    @classmethod
    def from_array(cls, bits: np.ndarray) -> "BitSequence":
        """Build from a 0/1 numpy array without per-element validation."""
        bits = np.asarray(bits, dtype=np.uint8)
        return cls(np.packbits(bits), bits.size)

    @classmethod
    def from_string(cls, text: str) -> "BitSequence":
        """Parse ASCII ``0``/``1`` characters; whitespace is ignored."""
        raw = np.frombuffer("".join(text.split()).encode("ascii"), dtype=np.uint8)
        bad = (raw != ord("0")) & (raw != ord("1"))
        if bad.any():
            pos = int(np.flatnonzero(bad)[0])
            raise ValueError(f"non-binary character {chr(raw[pos])!r} at position {pos}")
        return cls.from_array(raw - ord("0"))

    @property
    def n_bits(self) -> int:
        return self._n

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    @property
    def bits(self) -> np.ndarray:
        """Unpacked read-only uint8 view of the bits."""
        out = np.unpackbits(self._packed, count=self._n)
        out.flags.writeable = False
        return out

    def count_ones(self) -> int:
        return int(np.bitwise_count(self._packed).sum())

    def complement(self) -> "BitSequence":
        return BitSequence.from_array(1 - self.bits)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return BitSequence.from_array(self.bits[item])
        return int(self.bits[item])

    def __len__(self):
        return self._n

    def __iter__(self):
        return iter(self.bits.tolist())

    def __eq__(self, other):
        if not isinstance(other, BitSequence):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._packed, other._packed)

    def __hash__(self):
        return hash((self._n, self._packed.tobytes()))

    def to_string(self) -> str:
        return (self.bits + ord("0")).tobytes().decode("ascii")

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        if self._n <= 32:
            return f"BitSequence({self.to_string()!r})"
        return f"BitSequence(<{self._n} bits>)"


def pack_bits(raw: Iterable[int]) -> BitSequence:
    """Validate a sequence of 0/1 values and pack it, preserving order."""
    arr = np.asarray(list(raw) if not isinstance(raw, np.ndarray) else raw)
    if arr.size == 0:
        return BitSequence(np.zeros(0, dtype=np.uint8), 0)
    if arr.ndim != 1:
        raise ValueError("bits must be a flat sequence")
    bad = (arr != 0) & (arr != 1)
    if bad.any():
        pos = int(np.flatnonzero(bad)[0])
        raise ValueError(f"non-binary value {arr[pos]!r} at position {pos}")
    return BitSequence.from_array(arr.astype(np.uint8))


def bit_balance(seq: BitSequence) -> tuple[float, float]:
    """Return ``(fraction_zeros, fraction_ones)``.

    Both fractions come from integer counts so that they sum to exactly 1.
    """
    if seq.n_bits == 0:
        raise ValueError("empty bitstream")
    ones = Fraction(seq.count_ones(), seq.n_bits)
    f_ones = float(ones)
    # float(zeros) + float(ones) can differ from 1 by an ulp; 1 - f_ones cannot
    return 1.0 - f_ones, f_ones


@dataclass(frozen=True)
class TestResult:
    """Outcome of one statistical test.

    ``passed`` is derived: a test passes when it is applicable and every
    P-value is at least ``alpha``.
    """

    __test__ = False  # not a pytest class

    test_name: str
    p_values: tuple[float, ...]
    applicable: bool = True
    alpha: float = 0.01
    detail: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        ps = tuple(float(p) for p in self.p_values)
        if not ps:
            raise ValueError(f"{self.test_name}: at least one P-value required")
        clean = []
        for p in ps:
            if not (-1e-9 <= p <= 1 + 1e-9):
                raise ValueError(f"{self.test_name}: P-value {p} outside [0, 1]")
            clean.append(min(1.0, max(0.0, p)))
        object.__setattr__(self, "p_values", tuple(clean))
        object.__setattr__(self, "applicable", bool(self.applicable))

    @property
    def passed(self) -> bool:
        return self.applicable and all(p >= self.alpha for p in self.p_values)

    @property
    def p_value(self) -> float:
        """Smallest P-value; the one that decides pass/fail."""
        return min(self.p_values)

    def to_dict(self) -> dict:
        return {
            "test_name": self.test_name,
            "p_values": list(self.p_values),
            "passed": self.passed,
            "applicable": self.applicable,
            "alpha": self.alpha,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class TestReport:
    __test__ = False

    results: tuple[TestResult, ...]
    sequence_length: int

    def __post_init__(self):
        object.__setattr__(self, "results", tuple(self.results))

    @property
    def applicable_results(self) -> list[TestResult]:
        return [r for r in self.results if r.applicable]

    @property
    def pass_fraction(self) -> float:
        app = self.applicable_results
        if not app:
            return 0.0
        return sum(r.passed for r in app) / len(app)

    def __getitem__(self, name: str) -> TestResult:
        for r in self.results:
            if r.test_name == name:
                return r
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "sequence_length": self.sequence_length,
            "pass_fraction": self.pass_fraction,
            "n_applicable": len(self.applicable_results),
            "n_passed": sum(r.passed for r in self.applicable_results),
            "composition": [r.test_name for r in self.results],
            "results": [r.to_dict() for r in self.results],
        }

