"""Exact arithmetic in a finitely generated Grassmann algebra.

Elements are stored in canonical form: a mapping from strictly increasing
tuples of generator indices to nonzero real coefficients. The empty tuple
keys the scalar part. Generators are plain non-negative integers and their
canonical order is numeric order.

Berezin integration follows the iterated convention

    int X dtheta_1 dtheta_2 = int ( int X dtheta_1 ) dtheta_2

so the first generator listed is integrated first. With this convention
``berezin(theta0 * theta1, [0, 1]) == -1``.
"""

from __future__ import annotations

from functools import lru_cache
from numbers import Real
from typing import Iterable, Mapping, Sequence

Key = tuple[int, ...]


class GrassmannError(ValueError):
    """Invalid operation on Grassmann elements."""


@lru_cache(maxsize=1 << 16)
def merge_sign(a: Key, b: Key) -> tuple[int, Key | None]:
    """Sign and canonical key of the monomial product ``a * b``.

    The sign is the parity of the number of transpositions needed to sort
    the concatenation of ``a`` and ``b``. A repeated generator gives
    ``(0, None)``.
    """
    if not a:
        return 1, b
    if not b:
        return 1, a
    inversions = 0
    i = j = 0
    merged = []
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        elif a[i] > b[j]:
            # b[j] jumps over every remaining element of a
            inversions += len(a) - i
            merged.append(b[j])
            j += 1
        else:
            return 0, None
    merged.extend(a[i:])
    merged.extend(b[j:])
    return (-1 if inversions & 1 else 1), tuple(merged)


@lru_cache(maxsize=1 << 14)
def berezin_monomial(key: Key, gen: int) -> tuple[int, Key | None]:
    """Single Berezin integral of a basis monomial with respect to ``gen``."""
    try:
        pos = key.index(gen)
    except ValueError:
        return 0, None
    # move gen to the right end, then int X theta dtheta = X
    sign = -1 if (len(key) - 1 - pos) & 1 else 1
    return sign, key[:pos] + key[pos + 1:]


@lru_cache(maxsize=1 << 14)
def left_derivative_monomial(key: Key, gen: int) -> tuple[int, Key | None]:
    """Left derivative of a basis monomial: ``gen`` is moved to the front."""
    try:
        pos = key.index(gen)
    except ValueError:
        return 0, None
    return (-1 if pos & 1 else 1), key[:pos] + key[pos + 1:]


def _canonical_key(gens: Sequence[int]) -> tuple[int, Key | None]:
    """Sort a generator word, returning the permutation sign."""
    sign, key = 1, ()
    for g in gens:
        s, key = merge_sign(key, (int(g),))
        if key is None:
            return 0, None
        sign *= s
    return sign, key


class GrassmannElement:
    """Immutable element of a Grassmann algebra with real coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Sequence[int], float] | None = None):
        acc: dict[Key, float] = {}
        for word, coeff in (terms or {}).items():
            sign, key = _canonical_key(tuple(word))
            if key is None:
                continue
            acc[key] = acc.get(key, 0.0) + sign * float(coeff)
        self._terms = {k: v for k, v in acc.items() if v != 0.0}

    @classmethod
    def _from_canonical(cls, terms: dict[Key, float]) -> GrassmannElement:
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v != 0.0}
        return obj

    @property
    def terms(self) -> dict[Key, float]:
        return dict(self._terms)

    def coefficient(self, key: Sequence[int] = ()) -> float:
        sign, canon = _canonical_key(tuple(key))
        if canon is None:
            return 0.0
        return sign * self._terms.get(canon, 0.0)

    @property
    def scalar_part(self) -> float:
        return self._terms.get((), 0.0)

    def generators(self) -> set[int]:
        return {g for key in self._terms for g in key}

    def is_zero(self) -> bool:
        return not self._terms

    def is_even(self) -> bool:
        return all(len(k) % 2 == 0 for k in self._terms)

    def is_odd(self) -> bool:
        return all(len(k) % 2 == 1 for k in self._terms)

    def allclose(self, other: GrassmannElement | Real, tol: float = 1e-12) -> bool:
        other = as_element(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(self._terms.get(k, 0.0) - other._terms.get(k, 0.0)) <= tol for k in keys)

    def drop(self, gens: Iterable[int]) -> GrassmannElement:
        """Set the listed generators to zero."""
        gens = set(gens)
        return GrassmannElement._from_canonical(
            {k: v for k, v in self._terms.items() if not gens.intersection(k)})

    def __add__(self, other):
        if not isinstance(other, (GrassmannElement, Real)):
            return NotImplemented
        return add_scale(self, as_element(other), 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (GrassmannElement, Real)):
            return NotImplemented
        return add_scale(self, as_element(other), -1.0)

    def __rsub__(self, other):
        if not isinstance(other, Real):
            return NotImplemented
        return add_scale(as_element(other), self, -1.0)

    def __neg__(self):
        return GrassmannElement._from_canonical({k: -v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, Real):
            return GrassmannElement._from_canonical(
                {k: v * float(other) for k, v in self._terms.items()})
        if isinstance(other, GrassmannElement):
            return mul(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Real):
            other = as_element(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        if not self._terms:
            return "GrassmannElement(0)"
        parts = []
        for key in sorted(self._terms, key=lambda k: (len(k), k)):
            mono = "".join(f"θ{g}" for g in key)
            parts.append(f"{self._terms[key]:g}{'*' + mono if mono else ''}")
        return "GrassmannElement(" + " + ".join(parts) + ")"


def as_element(x: GrassmannElement | Real) -> GrassmannElement:
    if isinstance(x, GrassmannElement):
        return x
    return GrassmannElement({(): float(x)})


def generator(index: int) -> GrassmannElement:
    if index < 0:
        raise GrassmannError(f"generator index must be non-negative, got {index}")
    return GrassmannElement._from_canonical({(int(index),): 1.0})


def scalar(value: float) -> GrassmannElement:
    return as_element(value)


def monomial(*gens: int, coeff: float = 1.0) -> GrassmannElement:
    """Product ``coeff * theta_{g1} theta_{g2} ...`` in the given order."""
    return GrassmannElement({tuple(gens): coeff})


def mul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    """Associative anticommuting product."""
    out: dict[Key, float] = {}
    for ka, ca in a._terms.items():
        for kb, cb in b._terms.items():
            sign, key = merge_sign(ka, kb)
            if key is None:
                continue
            out[key] = out.get(key, 0.0) + sign * ca * cb
    return GrassmannElement._from_canonical(out)


def add_scale(a: GrassmannElement, b: GrassmannElement, c: float) -> GrassmannElement:
    """Return ``a + c * b``."""
    out = dict(a._terms)
    c = float(c)
    for k, v in b._terms.items():
        out[k] = out.get(k, 0.0) + c * v
    return GrassmannElement._from_canonical(out)


def berezin(a: GrassmannElement, gens: Sequence[int]) -> GrassmannElement:
    """Iterated Berezin integral, integrating ``gens[0]`` first."""
    gens = [int(g) for g in gens]
    if len(set(gens)) != len(gens):
        raise GrassmannError(f"repeated generator in Berezin measure: {gens}")
    terms = a._terms
    for g in gens:
        out: dict[Key, float] = {}
        for key, coeff in terms.items():
            sign, rest = berezin_monomial(key, g)
            if rest is None:
                continue
            out[rest] = out.get(rest, 0.0) + sign * coeff
        terms = out
    return GrassmannElement._from_canonical(terms)


def left_derivative(a: GrassmannElement, gen: int) -> GrassmannElement:
    """Graded left derivative with respect to one generator."""
    out: dict[Key, float] = {}
    for key, coeff in a._terms.items():
        sign, rest = left_derivative_monomial(key, int(gen))
        if rest is None:
            continue
        out[rest] = out.get(rest, 0.0) + sign * coeff
    return GrassmannElement._from_canonical(out)
