"""Quadrature-based continuous-time LCT for compactly supported functions.

A function is stored as uniform samples on its support ``[t0, t1]`` and
evaluated by linear interpolation.  The transform integral is approximated
with the composite trapezoid rule, which converges at second order for the
smooth (chirped) integrands that arise here.  Only desk-scale verification
of the trivial ambiguities and of the autocorrelation identity is offered;
continuous ambiguities beyond the trivial ones are not constructed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import FrequencyGrid, LctParams, kernel
from .errors import QuadratureError

__all__ = [
    "SampledFunction",
    "continuous_lct",
    "rotate_function",
    "shift_function",
    "reflect_function",
    "parse_variant",
    "Prop31Report",
    "AutocorrReport",
    "verify_prop31",
    "autocorrelation_identity_check",
]


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Samples of ``f`` on ``len(samples)`` equispaced points of ``[t0, t1]``."""

    t0: float
    t1: float
    samples: np.ndarray

    def __post_init__(self):
        vals = np.array(self.samples, dtype=complex).reshape(-1)
        if vals.size < 2:
            raise ValueError("need at least two samples")
        if not float(self.t0) < float(self.t1):
            raise ValueError(f"support [{self.t0}, {self.t1}] is empty")
        if not np.all(np.isfinite(vals)):
            raise ValueError("samples must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "t0", float(self.t0))
        object.__setattr__(self, "t1", float(self.t1))
        object.__setattr__(self, "samples", vals)

    @classmethod
    def from_callable(cls, fn, t0: float, t1: float, count: int) -> "SampledFunction":
        t = np.linspace(t0, t1, count)
        return cls(t0, t1, np.asarray(fn(t), dtype=complex) * np.ones_like(t))

    @property
    def grid_step(self) -> float:
        return (self.t1 - self.t0) / (self.samples.size - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.samples.size)

    def __call__(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        ts = self.times
        re = np.interp(t, ts, self.samples.real, left=0.0, right=0.0)
        im = np.interp(t, ts, self.samples.imag, left=0.0, right=0.0)
        return re + 1j * im


def _nodes(f: SampledFunction, nodes: int | None):
    if nodes is None:
        nodes = f.samples.size
    if nodes < f.samples.size:
        raise QuadratureError(
            f"{nodes} quadrature nodes is fewer than the {f.samples.size} samples"
        )
    if nodes == f.samples.size:
        t, vals = f.times, f.samples
    else:
        t = np.linspace(f.t0, f.t1, nodes)
        vals = f(t)
    w = np.full(nodes, (f.t1 - f.t0) / (nodes - 1))
    w[[0, -1]] *= 0.5
    return t, vals, w


def continuous_lct(f: SampledFunction, p: LctParams, omega, nodes: int | None = None):
    """Trapezoid approximation of ``int f(t) K(omega, t) dt`` over ``[t0, t1]``.

    ``omega`` may be a scalar (complex result) or an array.
    """
    p.require_nondegenerate()
    t, vals, w = _nodes(f, nodes)
    om = np.asarray(omega, dtype=float)
    out = kernel(np.atleast_1d(om)[:, None], t[None, :], p) @ (w * vals)
    return complex(out[0]) if om.ndim == 0 else out


def rotate_function(f: SampledFunction, alpha: float) -> SampledFunction:
    return SampledFunction(f.t0, f.t1, np.exp(1j * alpha) * f.samples)


def shift_function(f: SampledFunction, shift: float, p: LctParams) -> SampledFunction:
    """``exp(-i a s t / b) f(t - s)`` sampled on the shifted grid."""
    p.require_nondegenerate()
    t = f.times + shift
    return SampledFunction(
        f.t0 + shift, f.t1 + shift, np.exp(-1j * p.a * shift * t / p.b) * f.samples
    )


def reflect_function(f: SampledFunction, p: LctParams) -> SampledFunction:
    """``exp(-i a t**2 / b) conj(f(-t))`` sampled on the mirrored grid."""
    p.require_nondegenerate()
    t = -f.times[::-1]
    return SampledFunction(
        -f.t1, -f.t0, np.exp(-1j * p.a * t**2 / p.b) * np.conj(f.samples[::-1])
    )


def parse_variant(text: str) -> tuple[str, float | None]:
    """``"rotate:2.1"``, ``"shift:0.7"`` or ``"reflect"``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "reflect":
        if arg:
            raise ValueError("reflect takes no argument")
        return name, None
    if name in ("rotate", "shift"):
        if not arg:
            raise ValueError(f"{name} needs an argument, e.g. {name}:0.5")
        return name, float(arg)
    raise ValueError(f"unknown variant {text!r}; expected rotate:a, shift:t or reflect")


def apply_variant(f: SampledFunction, p: LctParams, variant) -> SampledFunction:
    name, arg = parse_variant(variant) if isinstance(variant, str) else variant
    if name == "rotate":
        return rotate_function(f, arg)
    if name == "shift":
        return shift_function(f, arg, p)
    if name == "reflect":
        return reflect_function(f, p)
    raise ValueError(f"unknown variant {name!r}")


@dataclass
class Prop31Report:
    variant: str
    nodes: int
    omega: np.ndarray
    deviation: np.ndarray = field(repr=False)

    @property
    def max_deviation(self) -> float:
        return float(self.deviation.max()) if self.deviation.size else 0.0

    def as_dict(self) -> dict:
        return {
            "variant": self.variant,
            "nodes": self.nodes,
            "max_deviation": self.max_deviation,
            "omega": self.omega.tolist(),
            "deviation": self.deviation.tolist(),
        }


@dataclass
class AutocorrReport:
    nodes: int
    omega: np.ndarray
    autocorr: np.ndarray = field(repr=False)
    intensity: np.ndarray = field(repr=False)
    deviation: np.ndarray = field(repr=False)

    @property
    def max_deviation(self) -> float:
        return float(self.deviation.max()) if self.deviation.size else 0.0

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "max_deviation": self.max_deviation,
            "omega": self.omega.tolist(),
            "autocorr_re": self.autocorr.real.tolist(),
            "autocorr_im": self.autocorr.imag.tolist(),
            "intensity_sq": self.intensity.tolist(),
            "deviation": self.deviation.tolist(),
        }


def _relative(diff: np.ndarray, ref: np.ndarray) -> np.ndarray:
    scale = float(np.max(ref)) if ref.size else 0.0
    return diff / scale if scale > 0 else diff


def verify_prop31(
    f: SampledFunction,
    p: LctParams,
    variant,
    grid,
    nodes: int | None = None,
) -> Prop31Report:
    """Compare ``|LCT[f]|`` with the intensity of a trivially ambiguous variant.

    Deviations are ``||C[f]| - |C[g]|| / max |C[f]|`` per frequency.
    """
    name, arg = parse_variant(variant) if isinstance(variant, str) else variant
    label = name if arg is None else f"{name}:{arg!r}"
    g = apply_variant(f, p, (name, arg))
    omega = grid.points if isinstance(grid, FrequencyGrid) else np.atleast_1d(grid)
    omega = np.asarray(omega, dtype=float)
    nodes = f.samples.size if nodes is None else nodes
    cf = np.abs(continuous_lct(f, p, omega, nodes))
    cg = np.abs(continuous_lct(g, p, omega, nodes))
    return Prop31Report(label, nodes, omega, _relative(np.abs(cf - cg), cf))


def autocorrelation_identity_check(
    f: SampledFunction, p: LctParams, omega_list, nodes: int | None = None
) -> AutocorrReport:
    """Check ``A[u](i w) = |F[u](w)|**2`` for ``u = theta exp(i a t**2/(2b)) f``.

    The left side is a double trapezoid quadrature: the inner integral over
    ``s`` on each lag's overlap interval, the outer one over the lag ``t``.
    The right side is a single trapezoid Fourier integral.  Deviations are
    relative to ``max |F[u]|**2`` over ``omega_list``.
    """
    p.require_nondegenerate()
    t, vals, w = _nodes(f, nodes)
    M, h = t.size, t[1] - t[0]
    u = p.theta * np.exp(0.5j * p.a / p.b * t**2) * vals
    omega = np.atleast_1d(np.asarray(omega_list, dtype=float))

    # raw[m + M - 1] = sum_k conj(u[k]) u[k + m]
    raw = np.correlate(u, u, mode="full")
    m = np.arange(-(M - 1), M)
    lo = np.maximum(0, -m)          # first s-index of the overlap
    hi = np.minimum(M - 1, M - 1 - m)  # last s-index of the overlap
    ends = np.conj(u[lo]) * u[lo + m] + np.conj(u[hi]) * u[hi + m]
    r = h * (raw - 0.5 * ends)
    r[lo == hi] = 0.0  # single-point overlap has zero length
    wl = np.full(m.size, h)
    wl[[0, -1]] *= 0.5
    lhs = np.exp(-1j * np.outer(omega, m * h)) @ (wl * r)

    fu = np.exp(-1j * np.outer(omega, t)) @ (w * u)
    rhs = np.abs(fu) ** 2
    return AutocorrReport(M, omega, lhs, rhs, _relative(np.abs(lhs - rhs), rhs))
