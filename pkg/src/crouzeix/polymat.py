"""Polynomials, structured matrices and the flat real parameterization.

Coefficients are stored in ascending order: ``coeffs[j]`` multiplies
``zeta**j``.  Matrices are restricted to upper Hessenberg form (real
mode) or upper triangular form (complex mode); both restrictions lose
nothing since the Crouzeix ratio is unitarily invariant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.linalg

__all__ = [
    "FieldMode",
    "Polynomial",
    "StructuredMatrixPoint",
    "Layout",
    "ParameterVector",
    "CrabbDisk",
    "IceCreamCone",
    "eval_poly",
    "eval_poly_deriv",
    "eval_poly_matrix",
    "crabb_matrix",
    "assemble_reference",
    "to_structured",
    "pack",
    "unpack",
    "poly_roots",
]

ROOT_DEFLATION_TOL = 1e-12


class FieldMode(str, enum.Enum):
    REAL = "real"
    COMPLEX = "complex"


@dataclass(frozen=True)
class Polynomial:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if c.ndim != 1 or c.size < 1:
            raise ValueError("polynomial needs a 1-D coefficient vector of length >= 1")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def m(self) -> int:
        return self.coeffs.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def is_real(self) -> bool:
        return not np.any(self.coeffs.imag)

    def __call__(self, z):
        return eval_poly(self, z)

    def deriv(self, z):
        return eval_poly_deriv(self, z)

    def padded(self, m: int) -> "Polynomial":
        if m < self.m:
            if np.any(self.coeffs[m + 1:]):
                raise ValueError(f"polynomial of degree {self.m} does not fit in degree {m}")
            return Polynomial(self.coeffs[: m + 1])
        return Polynomial(np.concatenate([self.coeffs, np.zeros(m - self.m, dtype=complex)]))


PolyLike = Union[Polynomial, Sequence[complex], np.ndarray]


def as_poly(p: PolyLike) -> Polynomial:
    return p if isinstance(p, Polynomial) else Polynomial(p)


def eval_poly(p: PolyLike, z):
    """Horner evaluation; ``z`` may be a scalar or an array."""
    c = as_poly(p).coeffs
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, c[-1], dtype=complex)
    for cj in c[-2::-1]:
        out = out * z + cj
    return out[()] if out.ndim == 0 else out


def eval_poly_deriv(p: PolyLike, z):
    c = as_poly(p).coeffs
    z = np.asarray(z, dtype=complex)
    if c.size == 1:
        out = np.zeros(z.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    dc = c[1:] * np.arange(1, c.size)
    return eval_poly(dc, z)


def eval_poly_matrix(p: PolyLike, A: np.ndarray) -> np.ndarray:
    """p(A) by matrix Horner."""
    c = as_poly(p).coeffs
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix must be square")
    eye = np.eye(n, dtype=complex)
    X = c[-1] * eye
    for cj in c[-2::-1]:
        X = X @ A
        X[np.diag_indices(n)] += cj
    return X


def crabb_matrix(k: int) -> np.ndarray:
    """The k-by-k Crabb matrix; its field of values is the closed unit disk."""
    if k < 2:
        raise ValueError("Crabb matrix needs k >= 2")
    X = np.zeros((k, k))
    if k == 2:
        X[0, 1] = 2.0
        return X
    sup = np.ones(k - 1)
    sup[0] = sup[-1] = np.sqrt(2.0)
    X[np.arange(k - 1), np.arange(1, k)] = sup
    return X


def _structure_mask(n: int, mode: FieldMode) -> np.ndarray:
    i, j = np.indices((n, n))
    return i <= j + 1 if mode is FieldMode.REAL else i <= j


@dataclass(frozen=True)
class StructuredMatrixPoint:
    """A pair (p, A) with A upper Hessenberg and real (REAL) or upper triangular (COMPLEX)."""

    p: Polynomial
    A: np.ndarray
    mode: FieldMode

    def __post_init__(self):
        mode = FieldMode(self.mode)
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "p", as_poly(self.p))
        A = np.array(self.A, dtype=complex)
        n = A.shape[0]
        if A.ndim != 2 or A.shape != (n, n):
            raise ValueError("A must be square")
        if np.any(A[~_structure_mask(n, mode)]):
            kind = "upper Hessenberg" if mode is FieldMode.REAL else "upper triangular"
            raise ValueError(f"A is not {kind}")
        if mode is FieldMode.REAL:
            if np.any(A.imag) or not self.p.is_real():
                raise ValueError("real mode requires real A and real coefficients")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.p.m

    @property
    def layout(self) -> "Layout":
        return Layout(self.n, self.m, self.mode)


@dataclass(frozen=True)
class Layout:
    """Maps a structured pair to a flat real vector and back.

    Real mode: c_0..c_m, then the Hessenberg support column by column.
    Complex mode: (Re, Im) of c_0..c_m, then (Re, Im) of the upper
    triangle column by column.
    """

    n: int
    m: int
    mode: FieldMode

    def __post_init__(self):
        object.__setattr__(self, "mode", FieldMode(self.mode))
        if self.n < 1 or self.m < 0:
            raise ValueError("need n >= 1 and m >= 0")

    @property
    def support(self) -> tuple[np.ndarray, np.ndarray]:
        # column-major order over the structural support
        cols, rows = np.nonzero(_structure_mask(self.n, self.mode).T)
        return rows, cols

    @property
    def size(self) -> int:
        n, m = self.n, self.m
        if self.mode is FieldMode.REAL:
            return (m + 1) + n * (n + 1) // 2 + (n - 1)
        return 2 * (m + 1) + n * (n + 1)

    def _complex_entries(self, c: np.ndarray, A: np.ndarray) -> np.ndarray:
        rows, cols = self.support
        return np.concatenate([c, A[rows, cols]])

    def to_vector(self, c, A) -> np.ndarray:
        z = self._complex_entries(np.asarray(c, dtype=complex), np.asarray(A, dtype=complex))
        if self.mode is FieldMode.REAL:
            return z.real.copy()
        out = np.empty(2 * z.size)
        out[0::2] = z.real
        out[1::2] = z.imag
        return out

    def from_vector(self, x) -> tuple[np.ndarray, np.ndarray]:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.size,):
            raise ValueError(f"expected a vector of length {self.size}, got shape {x.shape}")
        z = x.astype(complex) if self.mode is FieldMode.REAL else x[0::2] + 1j * x[1::2]
        c = z[: self.m + 1]
        A = np.zeros((self.n, self.n), dtype=complex)
        rows, cols = self.support
        A[rows, cols] = z[self.m + 1:]
        return c, A

    def gradient_vector(self, gc, gA) -> np.ndarray:
        """Pack a derivative given as complex weights into the real parameter space.

        ``gc[j]`` and ``gA[i, l]`` are such that the directional derivative
        along (dc, dA) is ``Re(sum gc*dc + sum gA*dA)``.  A real parameter
        perturbing Re(x) picks up Re(g); one perturbing Im(x) picks up -Im(g).
        """
        z = self._complex_entries(np.asarray(gc, dtype=complex), np.asarray(gA, dtype=complex))
        if self.mode is FieldMode.REAL:
            return z.real.copy()
        out = np.empty(2 * z.size)
        out[0::2] = z.real
        out[1::2] = -z.imag
        return out

    def point(self, x) -> StructuredMatrixPoint:
        c, A = self.from_vector(x)
        if self.mode is FieldMode.REAL:
            c, A = c.real, A.real
        return StructuredMatrixPoint(Polynomial(c), A, self.mode)


@dataclass(frozen=True)
class ParameterVector:
    values: np.ndarray
    layout: Layout


def pack(pt: StructuredMatrixPoint) -> ParameterVector:
    lay = pt.layout
    return ParameterVector(lay.to_vector(pt.p.coeffs, pt.A), lay)


def unpack(v: ParameterVector) -> StructuredMatrixPoint:
    return v.layout.point(v.values)


def to_structured(p: PolyLike, A: np.ndarray, mode: Optional[FieldMode] = None) -> StructuredMatrixPoint:
    """Reduce a general pair to Hessenberg (real) or triangular (complex) form.

    The reduction is a unitary similarity, so the Crouzeix ratio is unchanged.
    """
    p = as_poly(p)
    A = np.asarray(A)
    if mode is None:
        mode = FieldMode.REAL if (not np.any(np.imag(A)) and p.is_real()) else FieldMode.COMPLEX
    mode = FieldMode(mode)
    n = A.shape[0]
    if mode is FieldMode.REAL:
        Ar = np.real(A).astype(float)
        H = Ar if not np.any(Ar[~_structure_mask(n, mode)]) else scipy.linalg.hessenberg(Ar)
        H = np.where(_structure_mask(n, mode), H, 0.0)
        return StructuredMatrixPoint(Polynomial(p.coeffs.real), H, mode)
    Ac = A.astype(complex)
    if np.any(Ac[~_structure_mask(n, mode)]):
        Ac, _ = scipy.linalg.schur(Ac, output="complex")
    return StructuredMatrixPoint(p, np.triu(Ac), mode)


@dataclass(frozen=True)
class CrabbDisk:
    """lambda*I + beta*U diag(Xi_k, B) U^*, paired with (zeta - lambda)^(k-1)."""

    k: int
    center: complex = 0.0
    scale: complex = 1.0
    unitary: Optional[np.ndarray] = None
    fill: Optional[np.ndarray] = None


@dataclass(frozen=True)
class IceCreamCone:
    """diag(vertex, B) with the vertex outside W(B).

    ``poly`` defaults to zeta - mu, mu the mean eigenvalue of B.
    """

    vertex: complex
    block: np.ndarray
    poly: Optional[np.ndarray] = None


def _fill_block(fill, size: int) -> np.ndarray:
    if fill is None:
        return np.zeros((size, size))
    B = np.atleast_2d(np.asarray(fill))
    if B.shape != (size, size):
        raise ValueError(f"fill block must be {size}x{size}, got {B.shape}")
    return B


def assemble_reference(cfg, n: int, m: int) -> StructuredMatrixPoint:
    if isinstance(cfg, CrabbDisk):
        k = cfg.k
        if k < 2 or k > min(n, m + 1):
            raise ValueError(f"need 2 <= k <= min(n, m+1), got k={k}, n={n}, m={m}")
        if cfg.scale == 0:
            raise ValueError("scale must be nonzero")
        B = _fill_block(cfg.fill, n - k)
        if B.size and _numerical_radius(B) > 1 + 1e-12:
            raise ValueError("fill block must have its field of values in the unit disk")
        M = scipy.linalg.block_diag(crabb_matrix(k), B).astype(complex)
        if cfg.unitary is not None:
            U = np.asarray(cfg.unitary, dtype=complex)
            if U.shape != (n, n):
                raise ValueError("unitary has the wrong shape")
            M = U @ M @ U.conj().T
        A = cfg.center * np.eye(n) + cfg.scale * M
        # (zeta - center)^(k-1) by repeated convolution
        c = np.array([1.0 + 0j])
        for _ in range(k - 1):
            c = np.convolve(c, [-cfg.center, 1.0])
        p = Polynomial(c).padded(m)
        return to_structured(p, A)

    if isinstance(cfg, IceCreamCone):
        B = np.atleast_2d(np.asarray(cfg.block))
        if B.shape[0] + 1 != n:
            raise ValueError(f"block must be {n - 1}x{n - 1}")
        lam = complex(cfg.vertex)
        if _contains_point(B, lam):
            raise ValueError("vertex lies in W(B)")
        if cfg.poly is None:
            mu = np.trace(B) / B.shape[0]
            p = Polynomial([-mu, 1.0])
        else:
            p = as_poly(cfg.poly)
        p = p.padded(m)
        pB = np.linalg.norm(eval_poly_matrix(p, B), 2)
        if not abs(eval_poly(p, lam)) > pB:
            raise ValueError("|p(vertex)| must exceed ||p(B)||_2")
        A = scipy.linalg.block_diag(np.array([[lam]]), B)
        return to_structured(p, A)

    raise TypeError(f"unknown reference configuration {type(cfg).__name__}")


def _support_values(A: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    e = np.exp(1j * thetas)[:, None, None]
    H = 0.5 * (e * A + np.conj(e) * A.conj().T)
    return np.linalg.eigvalsh(H)[:, -1]


def _numerical_radius(B: np.ndarray, samples: int = 2048) -> float:
    thetas = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    return float(np.max(_support_values(B, thetas)))


def _contains_point(B: np.ndarray, lam: complex, samples: int = 2048) -> bool:
    # lam is outside W(B) iff some support line separates it
    thetas = np.linspace(0, 2 * np.pi, samples, endpoint=False)
    h = _support_values(B, thetas)
    return not np.any(np.real(np.exp(1j * thetas) * lam) > h + 1e-12 * (1 + abs(lam)))


def poly_roots(p: PolyLike) -> tuple[np.ndarray, int]:
    """Finite roots from companion eigenvalues, plus the count of roots at infinity.

    Leading coefficients below ``1e-12 * max|c_j|`` are dropped; each dropped
    degree is reported as a root at infinity.
    """
    c = as_poly(p).coeffs
    if not np.any(c):
        raise ValueError("zero polynomial has no well-defined roots")
    thresh = ROOT_DEFLATION_TOL * np.max(np.abs(c))
    top = c.size - 1
    while abs(c[top]) < thresh:
        top -= 1
    n_inf = c.size - 1 - top
    if top == 0:
        return np.empty(0, dtype=complex), n_inf
    roots = np.polynomial.polynomial.polyroots(c[: top + 1])
    return np.asarray(roots, dtype=complex), n_inf
