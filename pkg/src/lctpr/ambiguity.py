"""Ambiguities of discrete phase retrieval from LCT magnitudes.

With ``u = theta * x * exp(i a n**2 / (2b))`` the intensity satisfies
``|C[x](w)| = |DTFT[u](w / b)|``, so every solution ``y`` is obtained from a
Fourier phase retrieval solution for ``u`` by removing ``theta`` and the
chirp.  Writing ``U(z) = sum_k u[start + k] z**k`` (``z = exp(-i w)``), the
zeros ``beta_j`` of ``U`` are one member of each conjugate-reciprocal pair of
zeros of the autocorrelation polynomial; choosing the other member gives
another signal with the same intensity.  Rotation, the chirped shift and the
chirped conjugate reflection are always available and are factored out by
:func:`canonicalize`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cmp_to_key

import numpy as np

from .core import FrequencyGrid, LctParams, Signal, chirp_modulate, forward
from .errors import DegenerateError, SingularSystemError, ZeroRootError
from .roots import DEFAULT_PAIR_TOL, RootSet, aberth, pair_roots, refine_multiple

__all__ = [
    "Autocorrelation",
    "AutocorrPolynomial",
    "AmbiguitySolution",
    "IntensityPolynomial",
    "IntensityReport",
    "autocorrelation",
    "autocorr_polynomial",
    "find_roots",
    "pair_roots",
    "solution_scale",
    "build_solution",
    "enumerate_solutions",
    "trivial_rotate",
    "trivial_shift",
    "trivial_reflect",
    "canonicalize",
    "same_class",
    "intensity_from_samples",
    "verify_intensity_match",
]

log = logging.getLogger(__name__)

CANON_FUZZ = 1e-10
ROOT_TOL = 1e-12
MAX_CONDITION = 1e12


@dataclass(frozen=True, eq=False)
class Autocorrelation:
    """Autocorrelation lags ``n = -N+1, ..., N-1`` (``values[n + N - 1]``)."""

    values: np.ndarray
    N: int

    def __getitem__(self, n: int) -> complex:
        if not -self.N < n < self.N:
            return 0j
        return complex(self.values[n + self.N - 1])

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.N + 1, self.N)

    def dtft(self, omega) -> np.ndarray:
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        return np.exp(-1j * np.outer(omega, self.lags)) @ self.values


@dataclass(frozen=True, eq=False)
class AutocorrPolynomial:
    """``P(z) = sum_k coeffs[k] z**k`` of degree ``2N - 2``."""

    coeffs: np.ndarray
    N: int

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(z, self.coeffs)


@dataclass
class AmbiguitySolution:
    """One member of the solution set together with how it was built.

    ``selection`` has bit ``j`` set when the outer root of free pair ``j``
    was used as a zero of the chirped signal's z-transform.
    """

    signal: Signal
    selection: int
    n0: int
    alpha: float
    canonical: Signal
    max_rel_err: float = float("nan")


@dataclass(frozen=True)
class IntensityReport:
    max_rel_err: float
    passed: bool

    def as_dict(self) -> dict:
        return {"max_rel_err": self.max_rel_err, "pass": self.passed}


def autocorrelation(u: Signal, convention: str = "fourier") -> Autocorrelation:
    """Autocorrelation of a finite signal.

    The default ``"fourier"`` convention is ``a[n] = sum_k conj(u[k]) u[k+n]``,
    for which ``DTFT[a](w) = |DTFT[u](w)|**2`` and the zeros of ``U`` are among
    the zeros of the autocorrelation polynomial.  ``"literal"`` conjugates the
    second factor instead, ``a[n] = sum_k u[k] conj(u[k+n])``; that sequence
    is the complex conjugate of the default one, its DTFT is
    ``|DTFT[u](-w)|**2``, and its polynomial has the conjugated zeros.
    """
    v = u.values
    N = v.size
    # np.correlate(v, v, "full")[m] = sum_k v[k + m - (N-1)] conj(v[k])
    a = np.correlate(v, v, mode="full")
    if convention == "literal":
        a = np.conj(a)
    elif convention != "fourier":
        raise ValueError(f"unknown autocorrelation convention {convention!r}")
    return Autocorrelation(a, N)


def autocorr_polynomial(a: Autocorrelation) -> AutocorrPolynomial:
    """Coefficients ``coeffs[k] = a[k - N + 1]``, i.e. ``z**(N-1) sum_n a[n] z**n``."""
    coeffs = np.array(a.values, dtype=complex)
    scale = np.abs(coeffs).max()
    if abs(coeffs[-1]) < 1e-13 * scale:
        raise DegenerateError(
            f"leading autocorrelation coefficient {abs(coeffs[-1]):.3g} is negligible "
            f"against max |a| = {scale:.3g}; the signal's end samples must be nonzero"
        )
    return AutocorrPolynomial(coeffs, a.N)


def find_roots(P: AutocorrPolynomial, tol: float = ROOT_TOL) -> np.ndarray:
    """The ``2N - 2`` zeros of ``P``, sorted by modulus then argument.

    Repeated zeros are returned as exact repeats (see ``refine_multiple``).
    """
    return refine_multiple(P.coeffs, aberth(P.coeffs, tol=tol))


def solution_scale(a: Autocorrelation, betas) -> float:
    """``sqrt(|a[N-1]| * prod_j 1/|beta_j|)``, the modulus of the top coefficient."""
    betas = np.asarray(betas, dtype=complex)
    mods = np.abs(betas)
    if np.any(mods < 1e-14):
        raise ZeroRootError("selected zeros must be nonzero")
    # log-sum keeps products of many large/small roots finite
    return float(np.exp(0.5 * (np.log(abs(a[a.N - 1])) - np.log(mods).sum())))


def build_solution(betas, scale: float, alpha: float, n0: int, p: LctParams) -> Signal:
    """Signal whose chirped DTFT is ``exp(i(alpha + w n0)) scale prod_j (exp(-iw) - beta_j)``.

    The product expands to ``sum_k c_k exp(-i w k)``; the chirped signal is
    ``u[k - n0] = scale exp(i alpha) c_k`` and the result is
    ``y[n] = u[n] exp(-i a n**2 / (2b)) / theta``.
    """
    p.require_nondegenerate()
    if not scale > 0:
        raise ValueError("scale must be positive")
    c = np.ones(1, dtype=complex)
    for beta in np.asarray(betas, dtype=complex):
        c = np.convolve(c, np.array([-beta, 1.0]))
    u = scale * np.exp(1j * alpha) * c
    start = -int(n0)
    n = np.arange(start, start + u.size, dtype=float)
    y = u * np.exp(-0.5j * p.a / p.b * n**2) / p.theta
    return Signal(start, y)


def trivial_rotate(x: Signal, alpha: float) -> Signal:
    """``exp(i alpha) x``."""
    return Signal(x.start, np.exp(1j * alpha) * x.values)


def trivial_shift(x: Signal, n0: int, p: LctParams) -> Signal:
    """``exp(-i a n0 n / b) x[n - n0]``."""
    p.require_nondegenerate()
    n0 = int(n0)
    n = np.arange(x.start + n0, x.stop + n0, dtype=float)
    return Signal(x.start + n0, np.exp(-1j * p.a * n0 * n / p.b) * x.values)


def trivial_reflect(x: Signal, p: LctParams) -> Signal:
    """``exp(-i a n**2 / b) conj(x[-n])``."""
    p.require_nondegenerate()
    start = -(x.stop - 1)
    n = np.arange(start, start + x.N, dtype=float)
    return Signal(start, np.exp(-1j * p.a * n**2 / p.b) * np.conj(x.values[::-1]))


def _normalize(x: Signal, p: LctParams) -> Signal:
    y = trivial_shift(x, -x.start, p)
    first = y.values[0]
    vals = y.values * (abs(first) / first)
    vals[0] = abs(first)
    return Signal(0, vals)


def _normal_forms(x: Signal, p: LctParams) -> tuple[Signal, Signal]:
    return _normalize(x, p), _normalize(trivial_reflect(x, p), p)


def _lex_cmp(x: Signal, y: Signal, fuzz: float) -> int:
    for u, v in zip(x.values, y.values):
        for s, t in ((u.real, v.real), (u.imag, v.imag)):
            if abs(s - t) > fuzz:
                return -1 if s < t else 1
    return (x.N > y.N) - (x.N < y.N)


def _fuzz(x: Signal, fuzz: float) -> float:
    return fuzz * max(1.0, float(np.abs(x.values).max()))


def canonicalize(x: Signal, p: LctParams, fuzz: float = CANON_FUZZ) -> Signal:
    """Representative of ``x`` modulo rotation, chirped shift and reflection.

    Both ``x`` and its reflection are shifted to start at 0 and rotated so
    the first sample is positive real; the lexicographically smaller one by
    ``(Re, Im)`` sample order wins.  Entries closer than ``fuzz`` (relative to
    ``max(1, max|x|)``) compare equal.
    """
    plain, reflected = _normal_forms(x, p)
    return plain if _lex_cmp(plain, reflected, _fuzz(x, fuzz)) <= 0 else reflected


def same_class(x: Signal, y: Signal, p: LctParams, rtol: float = 1e-8) -> bool:
    """Whether ``y`` lies in the trivial-ambiguity orbit of ``x``.

    Compares the normal form of ``y`` with both normal forms of ``x``, which
    is insensitive to near-ties in the lexicographic choice.
    """
    if x.N != y.N:
        return False
    atol = rtol * float(np.abs(x.values).max())
    ny = _normalize(y, p).values
    return any(np.abs(nx.values - ny).max() <= atol for nx in _normal_forms(x, p))


def verify_intensity_match(
    x: Signal, y: Signal, p: LctParams, grid_size: int | None = None, tol: float = 1e-8
) -> IntensityReport:
    """Compare ``|C[x]|`` and ``|C[y]|`` on ``grid_size`` equispaced points of one
    period.  The error is ``max ||C[x]| - |C[y]|| / max |C[x]|``."""
    if grid_size is None:
        grid_size = 4 * max(x.N, y.N)
    grid = FrequencyGrid.uniform(p, grid_size)
    cx = np.abs(forward(x, p, grid))
    cy = np.abs(forward(y, p, grid))
    err = float(np.max(np.abs(cx - cy)) / np.max(cx))
    return IntensityReport(err, err <= tol)


def enumerate_solutions(
    x: Signal,
    p: LctParams,
    tol: float = 1e-8,
    pair_tol: float = DEFAULT_PAIR_TOL,
) -> list[AmbiguitySolution]:
    """All solutions with the intensity of ``x``, one per trivial-ambiguity class.

    Every selection of one root from each free conjugate-reciprocal pair is
    built with ``alpha = 0`` and ``n0 = 0``, checked against ``|C[x]|`` on a
    ``4N``-point grid at relative tolerance ``tol``, and reduced to its
    canonical form.  Candidates failing the check are dropped with a warning.
    Classes are returned sorted by canonical form.
    """
    p.require_nondegenerate()
    u = chirp_modulate(x, p)
    a = autocorrelation(u)
    if x.N == 1:
        rootset = RootSet([], [], 1, pair_tol)
    else:
        roots = find_roots(autocorr_polynomial(a))
        rootset = pair_roots(roots, pair_tol, N=x.N)

    classes: list[AmbiguitySolution] = []
    # normal forms (plain and reflected) of every class found so far
    known = np.empty((0, x.N), dtype=complex)
    atol = tol * float(np.abs(x.values).max())
    for mask in range(2 ** len(rootset.free_pairs)):
        betas = rootset.selection(mask)
        y = build_solution(betas, solution_scale(a, betas), 0.0, 0, p)
        report = verify_intensity_match(x, y, p, 4 * x.N, tol)
        if not report.passed:
            log.warning(
                "candidate %d fails the intensity check (max rel err %.3g > %.3g); dropped",
                mask, report.max_rel_err, tol,
            )
            continue
        plain, reflected = _normal_forms(y, p)
        if known.size and np.any(np.abs(known - plain.values).max(axis=1) <= atol):
            continue
        canon = canonicalize(y, p)
        classes.append(AmbiguitySolution(y, mask, 0, 0.0, canon, report.max_rel_err))
        known = np.vstack([known, plain.values, reflected.values])

    def cmp(s, t):
        c = _lex_cmp(s.canonical, t.canonical, _fuzz(s.canonical, CANON_FUZZ))
        return c if c else (s.selection > t.selection) - (s.selection < t.selection)

    return sorted(classes, key=cmp_to_key(cmp))


@dataclass(frozen=True, eq=False)
class IntensityPolynomial:
    """``|C[x](w)|**2 = sum_n coeffs[n] exp(-i w n / b)``, ``n = -N+1..N-1``.

    The coefficients are the autocorrelation of the chirped signal
    ``theta * x * exp(i a n**2 / (2b))``.
    """

    coeffs: np.ndarray
    N: int
    params: LctParams

    @property
    def lags(self) -> np.ndarray:
        return np.arange(-self.N + 1, self.N)

    def __call__(self, omega) -> np.ndarray:
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        return (np.exp(-1j * np.outer(omega / self.params.b, self.lags)) @ self.coeffs).real

    def as_autocorrelation(self) -> Autocorrelation:
        return Autocorrelation(self.coeffs, self.N)


def intensity_from_samples(samples, N: int, p: LctParams) -> IntensityPolynomial:
    """Fit the squared intensity from samples ``(omega, |C[x](omega)|)``.

    ``2N - 1`` samples at distinct points of one period determine the
    ``2N - 1`` coefficients; more samples give a least-squares fit.  Solved
    by SVD-based least squares; raises :class:`SingularSystemError` when the
    system's condition number exceeds ``1e12``.
    """
    p.require_nondegenerate()
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 2:
        raise ValueError("samples must be a sequence of (omega, value) pairs")
    if samples.shape[0] < 2 * N - 1:
        raise SingularSystemError(
            f"{samples.shape[0]} samples cannot determine {2 * N - 1} coefficients"
        )
    if np.any(samples[:, 1] < 0):
        raise ValueError("intensity samples must be nonnegative")
    omega, mag = samples[:, 0], samples[:, 1]
    lags = np.arange(-N + 1, N)
    A = np.exp(-1j * np.outer(omega / p.b, lags))
    coeffs, _, rank, sv = np.linalg.lstsq(A, (mag**2).astype(complex), rcond=None)
    cond = sv[0] / sv[-1] if sv[-1] > 0 else np.inf
    if rank < lags.size or cond > MAX_CONDITION:
        raise SingularSystemError(
            f"sample placement gives condition number {cond:.3g} (> {MAX_CONDITION:g}); "
            "use distinct points within one period"
        )
    return IntensityPolynomial(coeffs, N, p)
