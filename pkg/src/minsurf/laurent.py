"""Finite complex Laurent polynomials sum_k c_k z^k with integer k."""
from __future__ import annotations

from collections.abc import Iterable, Mapping

import numpy as np


class LaurentPoly:
    """Immutable Laurent polynomial stored as ``{exponent: coefficient}``.

    Zero coefficients are never stored, so ``LaurentPoly({})`` is the zero
    polynomial and equality is exact coefficient equality.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[int, complex] | Iterable[tuple[int, complex]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, complex] = {}
        for k, c in items:
            if int(k) != k:
                raise ValueError(f"exponent must be an integer, got {k!r}")
            acc[int(k)] = acc.get(int(k), 0j) + complex(c)
        self._terms = {k: c for k, c in sorted(acc.items()) if c != 0}

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> LaurentPoly:
        return cls({k: c})

    @classmethod
    def constant(cls, c: complex) -> LaurentPoly:
        return cls({0: c})

    @property
    def terms(self) -> dict[int, complex]:
        return dict(self._terms)

    def coeff(self, k: int) -> complex:
        return self._terms.get(k, 0j)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._terms)

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(iter(self._terms))

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise ValueError("zero polynomial has no exponents")
        return next(reversed(self._terms))

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(tuple(self._terms.items()))

    def __repr__(self) -> str:
        if not self._terms:
            return "LaurentPoly(0)"
        parts = [f"({c:.6g})*z^{k}" for k, c in self._terms.items()]
        return "LaurentPoly(" + " + ".join(parts) + ")"

    @staticmethod
    def _coerce(other) -> LaurentPoly:
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return LaurentPoly.constant(complex(other))
        raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")

    def __add__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0j) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self) -> LaurentPoly:
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> LaurentPoly:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> LaurentPoly:
        return self._coerce(other) - self

    def __mul__(self, other) -> LaurentPoly:
        other = self._coerce(other)
        acc: dict[int, complex] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                acc[k1 + k2] = acc.get(k1 + k2, 0j) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> LaurentPoly:
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent-polynomial inverses")
            ((k, c),) = self._terms.items()
            return LaurentPoly({k * n: c**n})
        out = LaurentPoly.constant(1.0)
        for _ in range(n):
            out = out * self
        return out

    def conj_coeffs(self) -> LaurentPoly:
        return LaurentPoly({k: c.conjugate() for k, c in self._terms.items()})

    def derivative(self) -> LaurentPoly:
        return LaurentPoly({k - 1: k * c for k, c in self._terms.items() if k != 0})

    def residue(self) -> complex:
        """Coefficient of z^-1, i.e. the residue of ``self * dz`` at 0."""
        return self.coeff(-1)

    def antiderivative(self) -> tuple[LaurentPoly, complex]:
        """Return ``(F, res)`` with d/dz (F + res*log z) = self."""
        res = self.residue()
        F = LaurentPoly({k + 1: c / (k + 1) for k, c in self._terms.items() if k != -1})
        return F, res

    def __call__(self, z):
        """Evaluate at a scalar or array of nonzero complex points."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in self._terms.items():
            out += c * z**k
        return out[()] if out.ndim == 0 else out

    def pole_order_at_zero(self) -> int:
        """Pole order of the 1-form ``self * dz`` at z = 0 (0 if holomorphic)."""
        if not self._terms:
            return 0
        return max(0, -self.min_exp)

    def pole_order_at_infinity(self) -> int:
        """Pole order of ``self * dz`` at z = infinity; z^k dz has order k + 2."""
        if not self._terms:
            return 0
        return max(0, self.max_exp + 2)

    def shifted_coefficients(self) -> tuple[np.ndarray, int]:
        """Coefficients of the ordinary polynomial z^(-min_exp) * self, highest degree first.

        Returns ``(coeffs, shift)`` where ``shift = min_exp``, suitable for
        :func:`numpy.roots` style routines.
        """
        lo, hi = self.min_exp, self.max_exp
        coeffs = np.zeros(hi - lo + 1, dtype=complex)
        for k, c in self._terms.items():
            coeffs[hi - k] = c
        return coeffs, lo

    def to_triples(self) -> list[list[float]]:
        return [[k, c.real, c.imag] for k, c in self._terms.items()]

    @classmethod
    def from_triples(cls, triples: Iterable[Iterable[float]]) -> LaurentPoly:
        seen = set()
        terms = []
        for entry in triples:
            k, re, im = entry
            if int(k) != k:
                raise ValueError(f"exponent must be an integer, got {k!r}")
            if int(k) in seen:
                raise ValueError(f"duplicate exponent {int(k)} in coefficient list")
            seen.add(int(k))
            terms.append((int(k), complex(re, im)))
        return cls(terms)


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of a polynomial (highest degree first) via companion-matrix eigenvalues."""
    coeffs = np.asarray(coeffs, dtype=complex)
    nz = np.flatnonzero(coeffs)
    if nz.size == 0:
        raise ValueError("zero polynomial has no well-defined roots")
    coeffs = coeffs[nz[0]:]
    trailing = coeffs.size - 1 - np.flatnonzero(coeffs)[-1]
    coeffs = coeffs[: coeffs.size - trailing]
    deg = coeffs.size - 1
    roots = [np.zeros(trailing, dtype=complex)]
    if deg > 0:
        companion = np.zeros((deg, deg), dtype=complex)
        companion[0, :] = -coeffs[1:] / coeffs[0]
        companion[1:, :-1] = np.eye(deg - 1)
        roots.append(np.linalg.eigvals(companion))
    return np.concatenate(roots)
