"""Gaussian super-Wick calculus for the superfield ``Φ = φ + ψ̄θ + ψθ̄ + ωθθ̄``.

Expectations of products of superfield powers are computed by expanding each
factor into field words with Grassmann coefficients, moving every generator
to the right of the fields (generators anticommute with ``ψ, ψ̄`` and commute
with ``φ, ω``), and then applying Wick's theorem: an Isserlis sum for the
bosonic pair ``(φ, ω)`` and a Pfaffian expansion with permutation signs for the
fermions. Times may be arrays, in which case everything is evaluated
pointwise; this is how the localization integrals are vectorised.

Covariances (with the symmetric-mollifier values at coincidence)::

    <φ(t) φ(s)>   = exp(-m²|t-s|) / (2m²)
    <φ(t) ω(s)>   = G(t - s)            <ω ω> = 0
    <ψ̄(t) ψ(s)>  = G(t - s)            <ψ(t) ψ̄(s)> = -G(s - t)
    G(t) = exp(-m² t) for t > 0,  0 for t < 0,  1/2 at t = 0
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from . import grassmann as gr
from .grassmann import GrassmannElement, Key
from .quadrature import integrate_simplex
from .scalar import ScalarFn

PHI, OMEGA, PSI, PSIBAR = "phi", "omega", "psi", "psibar"
BOSONS = (PHI, OMEGA)
FERMIONS = (PSI, PSIBAR)
MAX_MOMENT_DEGREE = 20


@dataclass(frozen=True)
class CovarianceSpec:
    m: float = 1.0
    G_at_zero: float = 0.5

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")

    @property
    def phi_var(self) -> float:
        return 1.0 / (2.0 * self.m**2)


@dataclass(frozen=True)
class FieldSymbol:
    kind: str
    time: float

    def __post_init__(self):
        if self.kind not in BOSONS + FERMIONS:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @property
    def is_odd(self) -> bool:
        return self.kind in FERMIONS


@dataclass(frozen=True)
class SuperInsertion:
    """Factor ``P(Φ(time, θ_i, θ̄_i))**power`` with ``θ_i = 2i``, ``θ̄_i = 2i+1``."""

    time: float
    pair_index: int
    power: int = 1
    poly: tuple[float, ...] = (0.0, 1.0)

    @property
    def theta(self) -> int:
        return 2 * self.pair_index

    @property
    def thetabar(self) -> int:
        return 2 * self.pair_index + 1


def kernel_G(spec: CovarianceSpec, t):
    """One-sided kernel ``exp(-m² t) 1[t > 0]`` with value 1/2 at zero."""
    t = np.asarray(t, float)
    out = np.where(t > 0, np.exp(-spec.m**2 * np.maximum(t, 0.0)),
                   np.where(t < 0, 0.0, spec.G_at_zero))
    return float(out) if out.ndim == 0 else out


def phi_cov(spec: CovarianceSpec, t, s):
    d = np.abs(np.asarray(t, float) - np.asarray(s, float))
    out = np.exp(-spec.m**2 * d) * spec.phi_var
    return float(out) if np.ndim(out) == 0 else out


def super_cov(spec: CovarianceSpec, t: float, s: float,
              gens: Sequence[int] = (0, 1, 2, 3)) -> GrassmannElement:
    """``<Φ(t, θ, θ̄) Φ(s, θ', θ̄')>`` over generators ``(θ, θ̄, θ', θ̄')``.

    Assembled from the closed form ``C(t,s) + G(t-s)(θ'-θ)θ̄' - G(s-t)(θ'-θ)θ̄``.
    """
    th, thb, thp, thbp = (gr.generator(g) for g in gens)
    diff = thp - th
    return (phi_cov(spec, t, s) + diff * thbp * kernel_G(spec, t - s)
            - diff * thb * kernel_G(spec, s - t))


# -- field polynomials with Grassmann coefficients -------------------------

# a field is (kind, slot); slots index a table of times supplied at evaluation
_Field = tuple[str, int]
_Word = tuple[_Field, ...]


def _normalize(word: Iterable[_Field]) -> _Word:
    """Bosons commute with everything: sort them to the front, keep fermion order."""
    word = tuple(word)
    bosons = sorted(f for f in word if f[0] in BOSONS)
    fermions = [f for f in word if f[0] in FERMIONS]
    return tuple(bosons) + tuple(fermions)


def _n_fermions(word: _Word) -> int:
    return sum(1 for f in word if f[0] in FERMIONS)


class FieldPolynomial:
    """Sum of ``coeff * (field word) * (Grassmann monomial)`` terms.

    Coefficients may be floats or arrays (pointwise in a quadrature grid).
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[_Word, Key], object] | None = None):
        self.terms = terms or {}

    @classmethod
    def one(cls) -> FieldPolynomial:
        return cls({((), ()): 1.0})

    @classmethod
    def superfield(cls, slot: int, theta: int, thetabar: int) -> FieldPolynomial:
        """``φ + ψ̄ θ + ψ θ̄ + ω θθ̄`` at one time slot."""
        poly = cls()
        poly._add(((PHI, slot),), (), 1.0)
        poly._add(((PSIBAR, slot),), (theta,), 1.0)
        poly._add(((PSI, slot),), (thetabar,), 1.0)
        sign, key = gr.merge_sign((theta,), (thetabar,))
        poly._add(((OMEGA, slot),), key, float(sign))
        return poly

    @classmethod
    def grassmann(cls, coeffs: dict[Key, object]) -> FieldPolynomial:
        return cls({((), k): c for k, c in coeffs.items()})

    def _add(self, word: _Word, key: Key, coeff):
        k = (word, key)
        self.terms[k] = self.terms[k] + coeff if k in self.terms else coeff

    def __add__(self, other: FieldPolynomial) -> FieldPolynomial:
        out = FieldPolynomial(dict(self.terms))
        for (w, k), c in other.terms.items():
            out._add(w, k, c)
        return out

    def scale(self, c) -> FieldPolynomial:
        return FieldPolynomial({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: FieldPolynomial) -> FieldPolynomial:
        out = FieldPolynomial()
        for (wa, ka), ca in self.terms.items():
            for (wb, kb), cb in other.terms.items():
                gsign, key = gr.merge_sign(ka, kb)
                if key is None:
                    continue
                # (Fa ga)(Fb gb) = (-1)^{|ga||Fb|} Fa Fb ga gb
                if len(ka) & 1 and _n_fermions(wb) & 1:
                    gsign = -gsign
                out._add(_normalize(wa + wb), key, gsign * (ca * cb))
        return out

    def power(self, n: int) -> FieldPolynomial:
        out = FieldPolynomial.one()
        for _ in range(n):
            out = out * self
        return out

    def prune_to_keys(self, allowed) -> FieldPolynomial:
        return FieldPolynomial({k: v for k, v in self.terms.items() if k[1] in allowed})


def polynomial_of(poly: FieldPolynomial, coeffs: Sequence[float]) -> FieldPolynomial:
    """``P(X)`` for ``P`` given by dense coefficients in increasing degree (Horner)."""
    coeffs = list(coeffs)
    out = FieldPolynomial()
    for c in reversed(coeffs):
        out = out * poly
        if c:
            out = out + FieldPolynomial.one().scale(float(c))
    return out


class _WickEvaluator:
    """Pairwise covariances and memoised Wick sums for one table of times."""

    def __init__(self, spec: CovarianceSpec, times: Sequence):
        self.spec = spec
        self.times = [np.asarray(t, float) if np.ndim(t) else float(t) for t in times]
        self._cache: dict[_Word, object] = {}

    def pair(self, a: _Field, b: _Field):
        (ka, sa), (kb, sb) = a, b
        ta, tb = self.times[sa], self.times[sb]
        spec = self.spec
        if ka == PHI and kb == PHI:
            return phi_cov(spec, ta, tb)
        if ka == PHI and kb == OMEGA:
            return spec.G_at_zero if sa == sb else kernel_G(spec, ta - tb)
        if ka == OMEGA and kb == PHI:
            return spec.G_at_zero if sa == sb else kernel_G(spec, tb - ta)
        if ka == PSIBAR and kb == PSI:
            return spec.G_at_zero if sa == sb else kernel_G(spec, ta - tb)
        if ka == PSI and kb == PSIBAR:
            return -spec.G_at_zero if sa == sb else -kernel_G(spec, tb - ta)
        return 0.0

    def bosonic(self, word: _Word):
        if not word:
            return 1.0
        if len(word) & 1:
            return 0.0
        if word in self._cache:
            return self._cache[word]
        first, rest = word[0], word[1:]
        total = 0.0
        seen = set()
        for j, other in enumerate(rest):
            # identical partners give identical contributions
            if other in seen:
                continue
            mult = sum(1 for x in rest if x == other)
            seen.add(other)
            cov = self.pair(first, other)
            if np.ndim(cov) == 0 and cov == 0.0:
                continue
            sub = self.bosonic(rest[:j] + rest[j + 1:])
            if np.ndim(sub) == 0 and sub == 0.0:
                continue
            total = total + mult * cov * sub
        self._cache[word] = total
        return total

    def fermionic(self, word: _Word):
        """Pfaffian expansion along the first element, keeping the order."""
        if not word:
            return 1.0
        if len(word) & 1:
            return 0.0
        key = ("F",) + word
        if key in self._cache:
            return self._cache[key]
        first, rest = word[0], word[1:]
        total = 0.0
        for j, other in enumerate(rest):
            cov = self.pair(first, other)
            if np.ndim(cov) == 0 and cov == 0.0:
                continue
            sub = self.fermionic(rest[:j] + rest[j + 1:])
            if np.ndim(sub) == 0 and sub == 0.0:
                continue
            sign = -1.0 if j & 1 else 1.0
            total = total + sign * cov * sub
        self._cache[key] = total
        return total

    def word(self, word: _Word):
        nb = len(word) - _n_fermions(word)
        bos = self.bosonic(word[:nb])
        if np.ndim(bos) == 0 and bos == 0.0:
            return 0.0
        return bos * self.fermionic(word[nb:])

    def expectation(self, poly: FieldPolynomial) -> dict[Key, object]:
        out: dict[Key, object] = {}
        for (word, key), coeff in poly.terms.items():
            val = self.word(word)
            if np.ndim(val) == 0 and val == 0.0:
                continue
            out[key] = out[key] + coeff * val if key in out else coeff * val
        return out


def field_expectation(spec: CovarianceSpec, fields: Sequence[FieldSymbol]) -> float:
    """Wick expectation of an ordered product of field symbols."""
    slots: dict[float, int] = {}
    word = []
    for f in fields:
        slot = slots.setdefault(f.time, len(slots))
        word.append((f.kind, slot))
    times = sorted(slots, key=slots.get)
    return float(_WickEvaluator(spec, times).word(_normalize(word)))


def _isserlis_recursive(cov: np.ndarray, exps: tuple[int, ...], memo: dict) -> float:
    if exps in memo:
        return memo[exps]
    i = next((k for k, e in enumerate(exps) if e), None)
    if i is None:
        return 1.0
    reduced = list(exps)
    reduced[i] -= 1
    total = 0.0
    # E[x_i x^b] = sum_j C_ij b_j E[x^(b - e_j)]
    for j, bj in enumerate(reduced):
        if bj and cov[i, j] != 0.0:
            nxt = list(reduced)
            nxt[j] -= 1
            total += cov[i, j] * bj * _isserlis_recursive(cov, tuple(nxt), memo)
    memo[exps] = total
    return total


def gaussian_moment(spec: CovarianceSpec, times: Sequence[float], exponents: Sequence[int]) -> float:
    """``<∏ φ(t_j)^{e_j}>`` for the stationary field (Isserlis/Wick)."""
    if len(times) != len(exponents):
        raise ValueError("times and exponents must have the same length")
    exps = tuple(int(e) for e in exponents)
    if any(e < 0 for e in exps):
        raise ValueError("exponents must be non-negative")
    degree = sum(exps)
    if degree > MAX_MOMENT_DEGREE:
        raise ValueError(f"moment degree {degree} exceeds {MAX_MOMENT_DEGREE}")
    if degree & 1:
        return 0.0
    t = np.asarray(times, float)
    cov = phi_cov(spec, t[:, None], t[None, :])
    cov = np.atleast_2d(cov)
    return float(_isserlis_recursive(cov, exps, {}))


def wick_super_expectation(spec: CovarianceSpec, insertions: Sequence[SuperInsertion],
                           prefactor_times: Sequence[tuple[float, int]] = ()) -> GrassmannElement:
    """``<∏ φ(t_j)^{m_j} ∏ P_i(Φ(τ_i, θ_i, θ̄_i))^{n_i}>`` as a Grassmann element."""
    pairs = [ins.pair_index for ins in insertions]
    if len(set(pairs)) != len(pairs):
        raise ValueError(f"pair indices must be unique, got {pairs}")
    times: list[float] = []
    poly = FieldPolynomial.one()
    for t, mult in prefactor_times:
        times.append(float(t))
        phi = FieldPolynomial({(((PHI, len(times) - 1),), ()): 1.0})
        poly = poly * phi.power(int(mult))
    for ins in insertions:
        times.append(float(ins.time))
        Phi = FieldPolynomial.superfield(len(times) - 1, ins.theta, ins.thetabar)
        poly = poly * polynomial_of(Phi, ins.poly).power(ins.power)
    values = _WickEvaluator(spec, times).expectation(poly)
    return GrassmannElement._from_canonical({k: float(v) for k, v in values.items()})


def fermionic_det(spec: CovarianceSpec, times: Sequence[float]) -> float:
    """``det(G_ij)`` with ``G_ij = G(t_j - t_i)`` off the diagonal and 1/2 on it."""
    t = np.asarray(times, float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("need at least one time")
    mat = kernel_G(spec, t[None, :] - t[:, None])
    mat = np.atleast_2d(mat).astype(float)
    np.fill_diagonal(mat, spec.G_at_zero)
    return float(np.linalg.det(mat))


# -- localization ------------------------------------------------------------

def _poly_coeffs(P) -> np.ndarray:
    if isinstance(P, Polynomial):
        return P.coef.astype(float)
    return np.asarray(P, float)


def _support_of(g: ScalarFn, support) -> tuple[float, float]:
    sup = support if support is not None else g.support
    if sup is None:
        raise ValueError("localization needs a compactly supported g; pass support=(lo, hi)")
    return float(sup[0]), float(sup[1])


def localization_integrand(spec: CovarianceSpec, prefactor: Sequence[tuple[float, int]],
                           g: ScalarFn, P, ell: int, pair_order: Sequence[int] | None = None):
    """Vectorised integrand of the nested localization integral.

    Returns ``f(nodes)`` where ``nodes[i]`` are the times ``τ_{i+1}``; the
    value is the Berezin integral over every ``(θ_i, θ̄_i)`` of the super
    expectation weighted by ``g(τ_i + 2θ_iθ̄_i)``.
    """
    coeffs = _poly_coeffs(P)
    k = len(prefactor)
    pair_order = list(range(ell)) if pair_order is None else list(pair_order)
    if sorted(pair_order) != list(range(ell)):
        raise ValueError(f"pair_order must be a permutation of range({ell})")
    base = FieldPolynomial.one()
    for j, (_, mult) in enumerate(prefactor):
        base = base * FieldPolynomial({(((PHI, j),), ()): 1.0}).power(int(mult))
    gens = []
    factors = []
    for i in range(ell):
        th, thb = 2 * pair_order[i], 2 * pair_order[i] + 1
        gens.extend([th, thb])
        Phi = FieldPolynomial.superfield(k + i, th, thb)
        factors.append((polynomial_of(Phi, coeffs), th, thb))
    g1 = g.derivative()
    full_key = tuple(sorted(gens))

    def integrand(nodes: np.ndarray) -> np.ndarray:
        nodes = np.atleast_2d(nodes)
        times = [float(t) for t, _ in prefactor] + [nodes[i] for i in range(ell)]
        poly = base
        for i, (PPhi, th, thb) in enumerate(factors):
            tau = nodes[i]
            sign, key = gr.merge_sign((th,), (thb,))
            lift = FieldPolynomial.grassmann({(): g(tau), key: sign * 2.0 * g1(tau)})
            poly = poly * (lift * PPhi)
        values = _WickEvaluator(spec, times).expectation(poly.prune_to_keys({full_key}))
        top = values.get(full_key)
        if top is None:
            return np.zeros(nodes.shape[1])
        sign, rest = 1, full_key
        for gen in gens:
            s, rest = gr.berezin_monomial(rest, gen)
            sign *= s
        return sign * np.broadcast_to(top, nodes.shape[1:]).astype(float)

    return integrand


def localization_lhs(spec: CovarianceSpec, prefactor: Sequence[tuple[float, int]], g: ScalarFn,
                     P, ell: int, quad_tol: float = 1e-9, upper: float | None = None,
                     support: tuple[float, float] | None = None,
                     pair_order: Sequence[int] | None = None) -> float:
    """Nested simplex integral of the Berezin-integrated super expectation.

    ``prefactor`` lists ``(t_j, m_j)`` with decreasing times; the simplex is
    ``-inf < τ_ℓ < ... < τ_1 < t_k`` (upper limit 0 when there is no
    prefactor), cut to the support of ``g``.
    """
    if ell < 1:
        raise ValueError("ell must be at least 1")
    ts = [t for t, _ in prefactor]
    if any(a <= b for a, b in zip(ts, ts[1:])):
        raise ValueError("prefactor times must be strictly decreasing")
    lo, hi = _support_of(g, support)
    top = upper if upper is not None else (ts[-1] if ts else 0.0)
    top = min(top, hi)
    if top <= lo:
        return 0.0
    integrand = localization_integrand(spec, prefactor, g, P, ell, pair_order)
    return integrate_simplex(integrand, lo, top, ell, quad_tol).value


def localization_rhs(spec: CovarianceSpec, prefactor: Sequence[tuple[float, int]], g: ScalarFn,
                     P, ell: int, t_k: float | None = None) -> float:
    """``(-2 g(t_k))^ℓ / ℓ! · <∏ φ(t_j)^{m_j} P(φ(t_k))^ℓ>``."""
    ts = [float(t) for t, _ in prefactor]
    ms = [int(m) for _, m in prefactor]
    t_k = t_k if t_k is not None else (ts[-1] if ts else 0.0)
    power = Polynomial(_poly_coeffs(P)) ** ell if ell else Polynomial([1.0])
    total = 0.0
    for deg, c in enumerate(power.coef):
        if c == 0.0:
            continue
        total += c * gaussian_moment(spec, ts + [t_k], ms + [deg])
    return (-2.0 * float(g(t_k))) ** ell / math.factorial(ell) * total


def corollary_lhs(spec: CovarianceSpec, m: int, g: ScalarFn, P, k: int,
                  quad_tol: float = 1e-9) -> float:
    """``<φ(0)^m (∫ G P(Φ))^k>`` summed over every ordering of the insertions.

    Each ordering is a separate simplex integral with permuted pair labels, so
    this also exercises the exchange symmetry used to reduce to one simplex.
    """
    if k == 0:
        return gaussian_moment(spec, [0.0], [m])
    prefactor = [(0.0, m)] if m else []
    return sum(localization_lhs(spec, prefactor, g, P, k, quad_tol, upper=0.0, pair_order=perm)
               for perm in itertools.permutations(range(k)))


def corollary_rhs(spec: CovarianceSpec, m: int, g: ScalarFn, P, k: int) -> float:
    """``(-2 G_∅(0))^k <φ(0)^m P(φ(0))^k>``."""
    return math.factorial(k) * localization_rhs(spec, [(0.0, m)] if m else [], g, P, k, t_k=0.0)
