"""Polynomial roots and conjugate-reciprocal pairing.

Roots are found with the Aberth-Ehrlich simultaneous iteration, which keeps
all approximations coupled and so copes with clustered roots better than
deflation.  Pairing organises the zeros of an autocorrelation polynomial into
pairs ``(g, 1/conj(g))`` and self-paired clusters on the unit circle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConvergenceError, PairingError

__all__ = ["aberth", "refine_multiple", "sort_roots", "RootSet", "pair_roots", "DEFAULT_PAIR_TOL"]

log = logging.getLogger(__name__)

DEFAULT_PAIR_TOL = 1e-7
MAX_ITER = 200
_POLISH_STEPS = 3
_SEED = 20170421
MULT_LINK = 0.25
MULT_TOL = 1e-11


def _horner(coeffs_desc: np.ndarray, z: np.ndarray):
    """Value and derivative of a polynomial (descending coefficients)."""
    p = np.full_like(z, coeffs_desc[0])
    dp = np.zeros_like(z)
    for c in coeffs_desc[1:]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def sort_roots(roots) -> np.ndarray:
    """Sort by modulus, then by argument in ``(-pi, pi]``."""
    roots = np.asarray(roots, dtype=complex)
    ang = np.angle(roots)
    ang = np.where(ang <= -np.pi + 1e-12, np.pi, ang)  # negative reals sort as +pi
    order = np.lexsort((np.round(ang, 12), np.round(np.abs(roots), 12)))
    return roots[order]


def aberth(coeffs, tol: float = 1e-12, max_iter: int = MAX_ITER) -> np.ndarray:
    """All roots of ``sum_k coeffs[k] z**k`` (ascending order, with multiplicity).

    Converged means ``|P(z)| <= tol * sum_k |coeffs[k]| |z|**k`` at every
    approximation.  The initial guesses sit on a slightly perturbed ring of
    radius ``|c_0 / c_deg|**(1/deg)``; the perturbation uses a fixed seed so
    results are reproducible.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = c.size - 1
    if deg < 1:
        raise ValueError("polynomial of degree < 1 has no roots to find")
    if c[0] == 0:
        raise ValueError("zero constant coefficient; factor out z first")
    desc = c[::-1]
    abs_desc = np.abs(desc)

    rng = np.random.default_rng(_SEED)
    radius = abs(c[0] / c[-1]) ** (1.0 / deg)
    angles = 2 * np.pi * np.arange(deg) / deg + 0.4 + 0.05 * rng.standard_normal(deg)
    z = radius * (1 + 0.01 * rng.standard_normal(deg)) * np.exp(1j * angles)

    def converged(z):
        val, _ = _horner(desc, z)
        scale, _ = _horner(abs_desc, np.abs(z).astype(complex))
        return np.abs(val) <= tol * np.abs(scale)

    polish = 0
    for it in range(max_iter):
        p, dp = _horner(desc, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, 1.0)
            inv = 1.0 / diff
            np.fill_diagonal(inv, 0.0)
            step = ratio / (1.0 - ratio * inv.sum(axis=1))
        step = np.where(np.isfinite(step), step, 0.0)
        step = np.where(p == 0, 0.0, step)
        z = z - step
        if converged(z).all():
            polish += 1
            if polish > _POLISH_STEPS:
                log.debug("aberth converged after %d iterations", it + 1)
                return sort_roots(z)
    if converged(z).all():
        return sort_roots(z)
    raise ConvergenceError(
        f"Aberth iteration did not reach residual tolerance {tol:g} "
        f"within {max_iter} iterations (degree {deg})"
    )


def _clusters(z: np.ndarray, link: float) -> list[list[int]]:
    """Single-linkage groups of indices, linking within ``link * max(1, |z|)``."""
    n = z.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= link * max(1.0, abs(z[i]), abs(z[j])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values() if len(g) > 1]


def _multiple_root(c: np.ndarray, z0: complex, k: int, tol: float):
    """Newton on the ``(k-1)``-th derivative, where a ``k``-fold root is simple.

    Returns the refined point, or ``None`` if ``P`` and its first ``k-1``
    derivatives do not all vanish there to within ``tol`` (relative to the
    absolute-value evaluation of each derivative).
    """
    q = P.polyder(c, k - 1)
    dq = P.polyder(q)
    z = complex(z0)
    for _ in range(60):
        d = P.polyval(z, dq)
        if d == 0:
            break
        step = P.polyval(z, q) / d
        z -= step
        if abs(step) <= 4e-16 * max(1.0, abs(z)):
            break
    if not np.isfinite(z):
        return None
    for j in range(k):
        dj = P.polyder(c, j)
        if abs(P.polyval(z, dj)) > tol * P.polyval(abs(z), np.abs(dj)):
            return None
    return z


def refine_multiple(coeffs, roots, link: float = MULT_LINK, tol: float = MULT_TOL) -> np.ndarray:
    """Replace split approximations of multiple roots by the multiple root.

    Approximations of a ``k``-fold root scatter over a ring of radius about
    ``eps**(1/k)``.  Each single-linkage cluster is tested as a ``k``-fold
    root, then with its ``k - 1, k - 2, ...`` members nearest the centroid.
    From the first accepted point higher multiplicities are tried as well,
    since ring members may fall outside the linkage radius.  The ``m``
    approximations nearest the final point are then replaced by it.
    Clusters of distinct roots fail the test and are left alone.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    z = np.array(roots, dtype=complex)
    deg = c.size - 1
    done = np.zeros(z.size, dtype=bool)
    for group in _clusters(z, link):
        idx = np.array([i for i in group if not done[i]])
        if idx.size < 2:
            continue
        idx = idx[np.argsort(np.abs(z[idx] - z[idx].mean()))]
        found = None
        for k in range(idx.size, 1, -1):
            r = _multiple_root(c, z[idx[:k]].mean(), k, tol)
            if r is not None:
                found = (r, k)
                break
        if found is None:
            continue
        r, m = found
        while m < min(deg, int((~done).sum())):
            r2 = _multiple_root(c, r, m + 1, tol)
            if r2 is None:
                break
            r, m = r2, m + 1
        free = np.flatnonzero(~done)
        sub = free[np.argsort(np.abs(z[free] - r))[:m]]
        log.debug("merged %d approximations into a %d-fold root %r", m, m, r)
        z[sub] = r
        done[sub] = True
    return sort_roots(z)


@dataclass
class RootSet:
    """Zeros of an autocorrelation polynomial, organised for enumeration.

    ``free_pairs`` holds ``(g, mirror)`` with ``|g| > 1`` and
    ``mirror ~ 1/conj(g)``; each pair offers a binary choice.
    ``unimodular_roots`` holds ``(g, multiplicity)`` clusters on the unit
    circle; ``g`` appears ``multiplicity // 2`` times in every solution.
    """

    free_pairs: list[tuple[complex, complex]]
    unimodular_roots: list[tuple[complex, int]]
    N: int
    tol: float = field(default=DEFAULT_PAIR_TOL, repr=False)

    @property
    def forced(self) -> list[complex]:
        out = []
        for g, mult in self.unimodular_roots:
            out.extend([g] * (mult // 2))
        return out

    def count(self) -> int:
        return 2 * len(self.free_pairs) + sum(m for _, m in self.unimodular_roots)

    def selection(self, mask: int) -> list[complex]:
        """Zeros of one candidate: bit ``j`` of ``mask`` picks the outer root
        of pair ``j``, otherwise the inner one; forced roots are appended."""
        betas = [
            outer if (mask >> j) & 1 else inner
            for j, (outer, inner) in enumerate(self.free_pairs)
        ]
        return betas + self.forced


def _cluster_on_circle(roots: np.ndarray, radius: float) -> list[tuple[complex, int]]:
    if roots.size == 0:
        return []
    order = np.argsort(np.angle(roots))
    roots = roots[order]
    groups = [[roots[0]]]
    for r in roots[1:]:
        if abs(r - groups[-1][-1]) <= radius:
            groups[-1].append(r)
        else:
            groups.append([r])
    # angle wraps at -pi/pi
    if len(groups) > 1 and abs(groups[0][0] - groups[-1][-1]) <= radius:
        groups[0] = groups.pop() + groups[0]
    clusters = []
    for g in groups:
        centre = np.mean(g)
        clusters.append((complex(centre / abs(centre)), len(g)))
    return clusters


def pair_roots(roots, tol: float = DEFAULT_PAIR_TOL, N: int | None = None) -> RootSet:
    """Split the roots into reflection pairs and unit-circle clusters.

    Off-circle roots (``||g| - 1| > tol``) are matched greedily, outermost
    first, to the remaining root nearest to ``1/conj(g)``; the match distance
    must be at most ``tol * max(1, |g|)``.  On-circle roots are clustered by
    proximity (radius ``sqrt(tol)``, since an even-multiplicity root splits by
    about the square root of the perturbation); every cluster needs even
    multiplicity.
    """
    roots = np.asarray(roots, dtype=complex)
    if N is None:
        N = roots.size // 2 + 1
    if roots.size != 2 * N - 2:
        raise PairingError(f"expected {2 * N - 2} roots for N = {N}, got {roots.size}")
    mods = np.abs(roots)
    on_circle = np.abs(mods - 1.0) <= tol
    outer = sorted(roots[~on_circle & (mods > 1)], key=lambda g: (-abs(g), np.angle(g)))
    inner = list(roots[~on_circle & (mods < 1)])
    if len(outer) != len(inner):
        raise PairingError(
            f"{len(outer)} roots outside vs {len(inner)} inside the unit circle; "
            f"the data are not a valid intensity at tolerance {tol:g}"
        )
    pairs = []
    for g in outer:
        target = 1.0 / np.conj(g)
        dists = np.abs(np.asarray(inner) - target)
        k = int(np.argmin(dists))
        if dists[k] > tol * max(1.0, abs(g)):
            raise PairingError(
                f"root {g:.6g} has no reflected partner within {tol:g} "
                f"(nearest misses 1/conj(g) by {dists[k]:.3g})"
            )
        pairs.append((complex(g), complex(inner.pop(k))))
    clusters = _cluster_on_circle(roots[on_circle], radius=max(np.sqrt(tol), 10 * tol))
    odd = [(g, m) for g, m in clusters if m % 2]
    if odd:
        raise PairingError(
            f"unit-circle root cluster(s) {[complex(g) for g, _ in odd]} have odd "
            "multiplicity; the data are not a valid intensity"
        )
    return RootSet(pairs, clusters, N, tol)
