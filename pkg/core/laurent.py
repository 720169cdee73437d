"""Laurent polynomials with integer or half-integer exponents.

Exponents are stored doubled (``two_min`` is twice the lowest exponent) so that
the spans ``z^{-|n|/2} .. z^{|n|/2}`` used throughout the library share one
integer representation regardless of the parity of ``|n|``.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Tuple, Union

import numpy as np

from core.errors import ParityMismatch, ZeroArgument, ZeroPolynomial

TWO_PI = 2.0 * math.pi

Number = Union[int, float, complex]


@dataclass(frozen=True)
class MultiIndex:
    """Multi-index ``n = (n_1, ..., n_r)`` of nonnegative integers."""

    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("A multi-index needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"Multi-index entries must be nonnegative, got {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def parse(cls, text: str) -> "MultiIndex":
        try:
            return cls(tuple(int(part) for part in text.replace(" ", "").split(",") if part != ""))
        except ValueError as e:
            raise ValueError(f"Invalid multi-index '{text}': {e}") from e

    @classmethod
    def zeros(cls, r: int) -> "MultiIndex":
        return cls((0,) * r)

    @classmethod
    def grid(cls, r: int, max_index: int) -> List["MultiIndex"]:
        """All indices in ``{0..max_index}^r`` in lexicographic order."""
        return [cls(entries) for entries in itertools.product(range(max_index + 1), repeat=r)]

    @property
    def r(self) -> int:
        return len(self.entries)

    @property
    def size(self) -> int:
        """|n|"""
        return sum(self.entries)

    def increment(self, j: int) -> "MultiIndex":
        """``n + e_j`` with 0-based ``j``."""
        entries = list(self.entries)
        entries[j] += 1
        return MultiIndex(tuple(entries))

    def scaled(self, k: int) -> "MultiIndex":
        return MultiIndex(tuple(k * e for e in self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, j: int) -> int:
        return self.entries[j]

    def __str__(self) -> str:
        return ",".join(str(e) for e in self.entries)


@dataclass(frozen=True)
class Branch:
    """Square-root branch with ``arg`` taking values in ``[t0, t0 + 2pi)``."""

    t0: float = 0.0

    def normalize(self, theta):
        """Map angles into ``[t0, t0 + 2pi)``."""
        offset = np.mod(np.asarray(theta, dtype=float) - self.t0, TWO_PI)
        # np.mod can round a tiny negative offset up to exactly 2pi
        offset = np.where(offset >= TWO_PI, 0.0, offset)
        result = self.t0 + offset
        return float(result) if np.ndim(result) == 0 else result

    def arg(self, z):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise ZeroArgument("The argument of 0 is undefined")
        return self.normalize(np.angle(z))

    def half_power(self, z, k: int):
        """``z^{k/2} = |z|^{k/2} exp(i k arg(z) / 2)``."""
        z = np.asarray(z, dtype=complex)
        theta = self.arg(z)
        value = np.abs(z) ** (k / 2.0) * np.exp(0.5j * k * theta)
        return complex(value) if np.ndim(value) == 0 else value


@dataclass(frozen=True, eq=False)
class HalfLaurentPoly:
    """``sum_i coeffs[i] z^{(two_min + 2 i) / 2}``; exact zeros at both ends are trimmed."""

    two_min: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).ravel()
        two_min = int(self.two_min)
        nonzero = np.flatnonzero(coeffs != 0)
        if nonzero.size == 0:
            coeffs = np.zeros(0, dtype=complex)
            two_min = 0
        else:
            two_min += 2 * int(nonzero[0])
            coeffs = coeffs[nonzero[0]:nonzero[-1] + 1].copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "two_min", two_min)

    @classmethod
    def zero(cls) -> "HalfLaurentPoly":
        return cls(0, [])

    @classmethod
    def monomial(cls, two_exp: int, coeff: Number = 1.0) -> "HalfLaurentPoly":
        return cls(two_exp, [coeff])

    @classmethod
    def from_exponents(cls, terms: Dict[int, Number]) -> "HalfLaurentPoly":
        """Build from ``{doubled exponent: coefficient}``."""
        if not terms:
            return cls.zero()
        keys = sorted(terms)
        if any((k - keys[0]) % 2 for k in keys):
            raise ParityMismatch(f"Doubled exponents {keys} mix parities")
        coeffs = np.zeros((keys[-1] - keys[0]) // 2 + 1, dtype=complex)
        for k, c in terms.items():
            coeffs[(k - keys[0]) // 2] = c
        return cls(keys[0], coeffs)

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    @property
    def two_max(self) -> int:
        return self.two_min + 2 * (self.coeffs.size - 1)

    @property
    def exponents2(self) -> np.ndarray:
        return self.two_min + 2 * np.arange(self.coeffs.size)

    @property
    def degree(self) -> int:
        """Degree of the ordinary polynomial ``z^{-two_min/2} p(z)``."""
        return max(self.coeffs.size - 1, 0)

    def coefficient(self, two_exp: int) -> complex:
        offset = two_exp - self.two_min
        if self.is_zero or offset % 2 or offset < 0 or offset // 2 >= self.coeffs.size:
            return 0j
        return complex(self.coeffs[offset // 2])

    def dense(self, two_lo: int, two_hi: int) -> np.ndarray:
        """Coefficients on the doubled-exponent window ``two_lo, two_lo + 2, ..., two_hi``."""
        return np.array([self.coefficient(e) for e in range(two_lo, two_hi + 1, 2)], dtype=complex)

    def evaluate(self, z, branch: Branch = Branch()):
        z = np.asarray(z, dtype=complex)
        if np.any(z == 0):
            raise ZeroArgument("Laurent polynomials are evaluated away from z = 0")
        theta = np.asarray(branch.arg(z))
        if self.is_zero:
            value = np.zeros_like(z)
        else:
            e = self.exponents2[:, None] / 2.0
            powers = np.abs(z).reshape(1, -1) ** e * np.exp(1j * e * theta.reshape(1, -1))
            value = (self.coeffs @ powers).reshape(z.shape)
        return complex(value) if np.ndim(value) == 0 else value

    def evaluate_on_circle(self, theta):
        """``p(e^{i theta})`` with ``z^{k/2} = e^{i k theta / 2}``; theta is taken as already on the branch."""
        theta = np.asarray(theta, dtype=float)
        if self.is_zero:
            value = np.zeros(theta.shape, dtype=complex)
        else:
            value = (self.coeffs @ np.exp(0.5j * np.outer(self.exponents2, theta.ravel()))).reshape(theta.shape)
        return complex(value) if np.ndim(value) == 0 else value

    def sharp(self) -> "HalfLaurentPoly":
        """``p^#(z) = conj(p(1 / conj(z)))``"""
        if self.is_zero:
            return self
        return HalfLaurentPoly(-self.two_max, np.conj(self.coeffs[::-1]))

    def shift_half(self, k: int) -> "HalfLaurentPoly":
        """Multiply by ``z^{k/2}``."""
        if self.is_zero:
            return self
        return HalfLaurentPoly(self.two_min + k, self.coeffs)

    def to_ordinary(self) -> np.ndarray:
        """Ascending coefficients of ``z^{-two_min/2} p(z)``."""
        if self.is_zero:
            raise ZeroPolynomial("The zero polynomial has no ordinary form")
        return np.array(self.coeffs)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if not self.is_zero else 0.0

    def __add__(self, other: "HalfLaurentPoly") -> "HalfLaurentPoly":
        if not isinstance(other, HalfLaurentPoly):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if (self.two_min - other.two_min) % 2:
            raise ParityMismatch(
                f"Cannot add exponent grids starting at {self.two_min}/2 and {other.two_min}/2"
            )
        lo = min(self.two_min, other.two_min)
        hi = max(self.two_max, other.two_max)
        return HalfLaurentPoly(lo, self.dense(lo, hi) + other.dense(lo, hi))

    def __neg__(self) -> "HalfLaurentPoly":
        return HalfLaurentPoly(self.two_min, -self.coeffs)

    def __sub__(self, other: "HalfLaurentPoly") -> "HalfLaurentPoly":
        return self + (-other)

    def __mul__(self, other: Union["HalfLaurentPoly", Number]) -> "HalfLaurentPoly":
        if isinstance(other, HalfLaurentPoly):
            if self.is_zero or other.is_zero:
                return HalfLaurentPoly.zero()
            return HalfLaurentPoly(self.two_min + other.two_min, np.convolve(self.coeffs, other.coeffs))
        if isinstance(other, (int, float, complex, np.number)):
            return HalfLaurentPoly(self.two_min, self.coeffs * complex(other))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HalfLaurentPoly):
            return NotImplemented
        return self.two_min == other.two_min and np.array_equal(self.coeffs, other.coeffs)

    def __repr__(self) -> str:
        terms = ", ".join(
            f"z^{e}/2: {c:.6g}" for e, c in zip(self.exponents2.tolist(), self.coeffs.tolist())
        )
        return f"HalfLaurentPoly({terms or '0'})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "two_min": self.two_min,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "HalfLaurentPoly":
        return cls(int(data["two_min"]), [complex(re, im) for re, im in data["coeffs"]])
