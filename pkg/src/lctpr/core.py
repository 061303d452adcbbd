"""Discrete-time linear canonical transform of finitely supported signals.

The transform with parameters ``(a, b, c, d)``, ``ad - bc = 1`` and ``b != 0``
acts on a sequence ``x[n]`` as ::

    C[x](w) = sum_n x[n] K(w, n)
    K(w, t) = theta * exp(i/2 * (a/b t**2 - 2/b w t + d/b w**2))
    theta   = (2 pi b)**(-1/2) * exp(-i pi/4)

which factors into a chirp, a discrete-time Fourier transform evaluated at
``w / b`` and a second chirp ::

    C[x](w) = theta exp(i d w**2 / (2b)) * DTFT[x[n] exp(i a n**2 / (2b))](w / b)

All indices entering a chirp are absolute, i.e. include ``Signal.start``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateParameterError, DeterminantError, QuadratureError

__all__ = [
    "DET_TOL",
    "B_TOL",
    "LctParams",
    "Signal",
    "FrequencyGrid",
    "make_params",
    "preset",
    "kernel",
    "chirp_modulate",
    "forward",
    "forward_dtft",
    "inverse",
]

DET_TOL = 1e-12
B_TOL = 1e-12
SUPPORT_TOL = 1e-14
TRIM_RTOL = 1e-10


@dataclass(frozen=True)
class LctParams:
    """Unimodular parameter matrix ``[[a, b], [c, d]]``.

    ``theta`` is derived on construction with the principal square root, so
    for ``b < 0`` it picks up an extra factor ``-i``; its modulus is always
    ``(2 pi |b|)**(-1/2)``.  A matrix with ``b == 0`` may be constructed but
    is flagged ``degenerate`` and rejected by every transform.
    """

    a: float
    b: float
    c: float
    d: float
    theta: complex = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        det = self.a * self.d - self.b * self.c
        if not abs(det - 1.0) <= DET_TOL:
            raise DeterminantError(
                f"ad - bc = {det!r} for (a, b, c, d) = {self.as_tuple()}; must equal 1"
            )
        if self.degenerate:
            theta = complex("nan")
        else:
            theta = np.exp(-0.25j * np.pi) / np.sqrt(complex(2.0 * np.pi * self.b))
        object.__setattr__(self, "theta", complex(theta))

    @property
    def degenerate(self) -> bool:
        return abs(self.b) <= B_TOL

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    def require_nondegenerate(self) -> "LctParams":
        if self.degenerate:
            raise DegenerateParameterError(
                f"b = {self.b!r} is zero; the LCT reduces to a chirped rescaling "
                "and phase retrieval from its modulus is not considered"
            )
        return self

    @property
    def period(self) -> float:
        """Period ``2 pi |b|`` of the intensity ``|C[x](w)|`` in ``w``."""
        return 2.0 * np.pi * abs(self.b)


def make_params(a: float, b: float, c: float, d: float) -> LctParams:
    """Validate ``(a, b, c, d)`` and return the parameter object."""
    return LctParams(a, b, c, d)


def preset(kind: str, alpha: float | None = None) -> LctParams:
    """Named special cases of the LCT.

    ``"fourier"`` gives ``(0, 1, -1, 0)``; ``"fresnel"`` gives
    ``(1, 1/(2 alpha), 0, 1)``; ``"frft"`` (fractional Fourier transform of
    angle ``alpha``) gives ``(cos alpha, sin alpha, -sin alpha, cos alpha)``.
    """
    kind = kind.lower()
    if kind == "fourier":
        return LctParams(0.0, 1.0, -1.0, 0.0)
    if alpha is None:
        raise ValueError(f"preset {kind!r} needs an angle/parameter alpha")
    alpha = float(alpha)
    if kind == "fresnel":
        if alpha == 0.0:
            raise DegenerateParameterError("fresnel preset requires alpha != 0")
        return LctParams(1.0, 1.0 / (2.0 * alpha), 0.0, 1.0)
    if kind == "frft":
        s, co = math.sin(alpha), math.cos(alpha)
        if abs(s) <= B_TOL:
            raise DegenerateParameterError(
                f"frft({alpha!r}) has b = sin(alpha) = {s!r}, which is zero"
            )
        return LctParams(co, s, -s, co)
    raise ValueError(f"unknown preset {kind!r}; expected fourier, fresnel or frft")


@dataclass(frozen=True, eq=False)
class Signal:
    """Finitely supported complex sequence ``x[start], ..., x[start + N - 1]``.

    Both end samples must be nonzero, so ``N`` is the exact support length.
    """

    start: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if vals.size == 0:
            raise ValueError("a signal needs at least one sample")
        if not np.all(np.isfinite(vals)):
            raise ValueError("signal values must be finite")
        if abs(vals[0]) <= SUPPORT_TOL or abs(vals[-1]) <= SUPPORT_TOL:
            raise ValueError(
                "first and last stored samples must be nonzero "
                f"(got |x[first]| = {abs(vals[0]):.3g}, |x[last]| = {abs(vals[-1]):.3g})"
            )
        vals.setflags(write=False)
        object.__setattr__(self, "start", int(self.start))
        object.__setattr__(self, "values", vals)

    @classmethod
    def trimmed(cls, values, start: int = 0, rtol: float = TRIM_RTOL) -> "Signal":
        """Build a signal after dropping leading/trailing samples below
        ``rtol * max|values|``."""
        vals = np.asarray(values, dtype=complex).reshape(-1)
        mags = np.abs(vals)
        if vals.size == 0 or mags.max() == 0.0:
            raise ValueError("cannot build a signal from an all-zero sequence")
        keep = np.flatnonzero(mags > rtol * mags.max())
        lo, hi = keep[0], keep[-1]
        return cls(start + int(lo), vals[lo : hi + 1])

    def __len__(self) -> int:
        return self.values.size

    @property
    def N(self) -> int:
        return self.values.size

    @property
    def stop(self) -> int:
        """Index one past the last sample."""
        return self.start + self.values.size

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start, self.stop)

    def __repr__(self) -> str:
        return f"Signal(start={self.start}, values={np.array2string(self.values, precision=4)})"

    def allclose(self, other: "Signal", atol: float = 1e-10) -> bool:
        return (
            self.start == other.start
            and self.N == other.N
            and bool(np.all(np.abs(self.values - other.values) <= atol))
        )


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """Strictly increasing frequency points.

    Unless ``extended`` is set, all points must lie in one period
    ``[-pi |b|, pi |b|)``; ``period_hint`` records ``2 pi |b|``.
    """

    points: np.ndarray
    period_hint: float
    extended: bool = False

    def __post_init__(self):
        pts = np.array(self.points, dtype=float).reshape(-1)
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        if not self.extended and pts.size:
            half = 0.5 * self.period_hint
            # one ulp of slack for grids built from pi*|b| products
            slack = 4 * np.finfo(float).eps * max(half, 1.0)
            if pts[0] < -half - slack or pts[-1] >= half + slack:
                raise ValueError(
                    f"grid points must lie in [-{half:g}, {half:g}); "
                    "pass extended=True for wider grids"
                )
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def uniform(cls, p: LctParams, count: int) -> "FrequencyGrid":
        """``count`` equispaced points over ``[-pi |b|, pi |b|)``."""
        if count < 1:
            raise ValueError("grid needs at least one point")
        period = p.require_nondegenerate().period
        pts = -0.5 * period + period * np.arange(count) / count
        return cls(pts, period)

    def __len__(self) -> int:
        return self.points.size


def _omega_array(grid) -> np.ndarray:
    if isinstance(grid, FrequencyGrid):
        return grid.points
    return np.atleast_1d(np.asarray(grid, dtype=float))


def kernel(omega, t, p: LctParams) -> np.ndarray:
    """LCT kernel ``K(omega, t)`` for ``b != 0`` (broadcasts)."""
    p.require_nondegenerate()
    a, b, d = p.a, p.b, p.d
    omega = np.asarray(omega, dtype=float)
    t = np.asarray(t, dtype=float)
    phase = 0.5 * (a / b * t**2 - 2.0 / b * omega * t + d / b * omega**2)
    return p.theta * np.exp(1j * phase)


def chirp_modulate(x: Signal, p: LctParams) -> Signal:
    """Return ``u[n] = theta * x[n] * exp(i a n**2 / (2b))`` on the same support."""
    p.require_nondegenerate()
    n = x.indices.astype(float)
    return Signal(x.start, p.theta * x.values * np.exp(0.5j * p.a / p.b * n**2))


def forward_dtft(u: Signal, omega) -> np.ndarray:
    """Discrete-time Fourier transform ``sum_n u[n] exp(-i omega n)``."""
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    return np.exp(-1j * np.outer(omega, u.indices)) @ u.values


def forward(x: Signal, p: LctParams, grid) -> np.ndarray:
    """Evaluate ``C[x](omega)`` at every grid point via the chirped DTFT."""
    p.require_nondegenerate()
    omega = _omega_array(grid)
    u = chirp_modulate(x, p)
    outer = np.exp(0.5j * p.d / p.b * omega**2)
    return outer * forward_dtft(u, omega / p.b)


def inverse(
    spectrum_fn: Callable[[np.ndarray], np.ndarray],
    p: LctParams,
    support_window: Sequence[int] | range,
    quadrature_nodes: int | None = None,
) -> Signal:
    """Recover a signal from its LCT by quadrature over one period.

    Computes ``x[n] = int_{-pi|b|}^{pi|b|} C(w) conj(K(w, n)) dw`` for ``n``
    in ``support_window`` with the composite trapezoid rule.  The kernel's
    ``|theta|**2 = 1 / (2 pi |b|)`` already supplies the normalisation.
    ``spectrum_fn`` is called once with the full node array.

    The result is trimmed to samples above ``1e-10`` times the largest one.
    """
    p.require_nondegenerate()
    window = np.arange(min(support_window), max(support_window) + 1)
    if quadrature_nodes is None:
        quadrature_nodes = 64 * window.size
    if quadrature_nodes < 2 * window.size:
        raise QuadratureError(
            f"{quadrature_nodes} nodes for a window of {window.size} samples; "
            f"need at least {2 * window.size}"
        )
    half = 0.5 * p.period
    omega = np.linspace(-half, half, quadrature_nodes)
    weights = np.full(quadrature_nodes, omega[1] - omega[0])
    weights[[0, -1]] *= 0.5
    spectrum = np.asarray(spectrum_fn(omega), dtype=complex).reshape(-1)
    if spectrum.shape != omega.shape:
        raise ValueError("spectrum_fn must return one value per frequency node")
    conj_k = np.conj(kernel(omega[None, :], window[:, None], p))
    values = conj_k @ (weights * spectrum)
    return Signal.trimmed(values, start=int(window[0]))
