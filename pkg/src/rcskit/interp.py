"""Recovery of rational functions from point samples.

Three routes with different guarantees:

* :func:`fit_rational` (exact field) -- interpolation through clean samples;
  ``k1 + k2 + 1`` independent points determine a degree-``(k1, k2)`` rational
  function.
* :func:`bw_rational` (exact field) -- decoding with up to ``t`` corrupted
  samples out of ``n >= k1 + k2 + 2t + 1``.  The error positions are unknown;
  the decoder multiplies the unknown function by an unknown error-locator
  polynomial that vanishes on them, which linearizes into a homogeneous system
  in the combined products (numerator*locator, denominator*locator).  Every
  nonzero nullspace vector yields the same quotient whenever
  ``n > k1 + k2 + 2t``, which is why the decoder may pick any of them.
* :func:`fit_rational` (float field) and :func:`fit_cheb_rational` -- linear
  least squares on the cross-multiplied residual; never exact, never claims
  error locations.

The exact linear algebra clears denominators to Gaussian integers and runs
fraction-free (Bareiss) elimination; divisions are guarded exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd as int_gcd, lcm
from typing import NamedTuple, Sequence

import numpy as np
from numpy.polynomial import chebyshev

from .errors import (
    InconsistentSamplesError,
    InfeasibleSystemError,
    PoleError,
    RankDeficiencyError,
    TooManyErrorsError,
    UnsupportedFieldError,
    ValidationError,
)
from .poly import EXACT, FLOAT, GaussianRational, Poly, RationalFn, simplify


class SamplePoint(NamedTuple):
    theta: object
    value: object


class SampleSet:
    """Distinct evaluation points with values in one coefficient field."""

    __slots__ = ("points", "field")

    def __init__(self, points: Sequence, field: str):
        if field not in (EXACT, FLOAT):
            raise ValidationError(f"unknown field tag {field!r}")
        norm = []
        seen = set()
        for theta, value in points:
            if field == EXACT:
                theta = theta if isinstance(theta, Fraction) else Fraction(theta)
                value = GaussianRational.coerce(value)
            else:
                theta = float(theta)
                value = complex(value)
            if theta in seen:
                raise ValidationError(f"duplicate sample point theta={theta}")
            seen.add(theta)
            norm.append(SamplePoint(theta, value))
        if not norm:
            raise ValidationError("empty sample set")
        object.__setattr__(self, "points", tuple(norm))
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("SampleSet is immutable")

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def thetas(self):
        return [p.theta for p in self.points]

    def values(self):
        return [p.value for p in self.points]


@dataclass(frozen=True)
class BWResult:
    f: RationalFn
    error_locations: tuple


# -- exact nullspace via fraction-free elimination ----------------------------


def _to_gaussian_integer_rows(rows):
    out = []
    for row in rows:
        den = 1
        for g in row:
            den = lcm(den, g.re.denominator, g.im.denominator)
        irow = [(int(g.re * den), int(g.im * den)) for g in row]
        content = 0
        for a, b in irow:
            content = int_gcd(content, a, b)
        if content > 1:
            irow = [(a // content, b // content) for a, b in irow]
        out.append(irow)
    return out


def _gi_div_exact(num, den):
    # exact Gaussian-integer division num/den; fraction-free elimination
    # guarantees divisibility, the guard catches logic errors loudly
    nr, ni = num
    dr, di = den
    mag = dr * dr + di * di
    re_num = nr * dr + ni * di
    im_num = ni * dr - nr * di
    re, re_rem = divmod(re_num, mag)
    im, im_rem = divmod(im_num, mag)
    if re_rem or im_rem:
        raise RuntimeError("internal error: inexact fraction-free division")
    return re, im


def exact_nullspace(rows, ncols: int):
    """Nullspace basis of a Gaussian-rational matrix, one vector per free column."""
    irows = _to_gaussian_integer_rows(rows)
    irows = [r for r in irows if any(e != (0, 0) for e in r)]
    nrows = len(irows)
    prev = (1, 0)
    rank = 0
    pivot_cols = []
    for col in range(ncols):
        pivot = None
        best = None
        for i in range(rank, nrows):
            e = irows[i][col]
            if e != (0, 0):
                size = max(abs(e[0]), abs(e[1])).bit_length()
                if best is None or size < best:
                    best, pivot = size, i
        if pivot is None:
            continue
        irows[rank], irows[pivot] = irows[pivot], irows[rank]
        pv = irows[rank][col]
        for i in range(rank + 1, nrows):
            fi = irows[i][col]
            new = []
            for j in range(ncols):
                a, b = irows[i][j], irows[rank][j]
                num = (
                    pv[0] * a[0] - pv[1] * a[1] - (fi[0] * b[0] - fi[1] * b[1]),
                    pv[0] * a[1] + pv[1] * a[0] - (fi[0] * b[1] + fi[1] * b[0]),
                )
                if prev == (1, 0):
                    new.append(num)
                else:
                    new.append(_gi_div_exact(num, prev))
            irows[i] = new
        pivot_cols.append(col)
        prev = pv
        rank += 1

    free_cols = [c for c in range(ncols) if c not in pivot_cols]
    basis = []
    for free in free_cols:
        x = [(Fraction(0), Fraction(0))] * ncols
        x[free] = (Fraction(1), Fraction(0))
        for r in range(rank - 1, -1, -1):
            pcol = pivot_cols[r]
            s_re = Fraction(0)
            s_im = Fraction(0)
            row = irows[r]
            for c in range(pcol + 1, ncols):
                a, b = row[c]
                if a == 0 and b == 0:
                    continue
                xr, xi = x[c]
                if xr == 0 and xi == 0:
                    continue
                s_re += a * xr - b * xi
                s_im += a * xi + b * xr
            pr, pi = row[pcol]
            mag = pr * pr + pi * pi
            x[pcol] = (
                -(s_re * pr + s_im * pi) / mag,
                -(s_im * pr - s_re * pi) / mag,
            )
        basis.append([GaussianRational(re, im) for re, im in x])
    return basis


def _homogeneous_rows(samples: SampleSet, num_degree: int, den_degree: int):
    rows = []
    for theta, value in samples:
        top = max(num_degree, den_degree)
        powers = [GaussianRational(1)]
        t = GaussianRational(theta)
        for _ in range(top):
            powers.append(powers[-1] * t)
        row = [powers[j] for j in range(num_degree + 1)]
        row += [-(value * powers[j]) for j in range(den_degree + 1)]
        rows.append(row)
    return rows


def _split_candidate(vec, num_degree: int, den_degree: int) -> RationalFn:
    num = Poly.exact(vec[: num_degree + 1])
    den = Poly.exact(vec[num_degree + 1 :])
    return simplify(num, den)


def _matches_all(f: RationalFn, samples: SampleSet) -> bool:
    for theta, value in samples:
        if f.den(theta).is_zero:
            return False
        if f(theta) != value:
            return False
    return True


def fit_rational(samples: SampleSet, k1: int, k2: int, trim: float = 0.0) -> RationalFn:
    """Degree-(k1, k2) rational through all samples.

    Exact field: exact interpolation; raises if the points are inconsistent
    with the degree bound or fail to pin down one function.  Float field:
    linear least squares on the cross-multiplied residual with optional
    worst-residual trimming (fraction of points dropped, one refit pass).
    """
    if k1 < 0 or k2 < 0:
        raise ValidationError("degree bounds must be nonnegative")
    if len(samples) < k1 + k2 + 1:
        raise ValidationError(
            f"need at least {k1 + k2 + 1} samples for degrees ({k1},{k2}), "
            f"got {len(samples)}"
        )
    if samples.field == FLOAT:
        return _fit_rational_float(samples, k1, k2, trim)

    rows = _homogeneous_rows(samples, k1, k2)
    basis = exact_nullspace(rows, k1 + k2 + 2)
    if not basis:
        raise InconsistentSamplesError(
            f"no rational function of degree ({k1},{k2}) fits the samples"
        )
    candidates = [_split_candidate(v, k1, k2) for v in basis]
    first = candidates[0]
    if any(not first.equivalent(c) for c in candidates[1:]):
        raise RankDeficiencyError(
            "interpolation conditions are not independent; "
            f"solution space has dimension {len(basis)}"
        )
    if not _matches_all(first, samples):
        raise InconsistentSamplesError(
            f"no rational function of degree ({k1},{k2}) passes through every sample"
        )
    return RationalFn(first.num, first.den, (k1, k2))


def bw_quotient_candidates(samples: SampleSet, k1: int, k2: int, t: int):
    """All simplified quotients, one per nullspace basis vector (testing hook)."""
    rows = _homogeneous_rows(samples, k1 + t, k2 + t)
    basis = exact_nullspace(rows, k1 + k2 + 2 * t + 2)
    return [_split_candidate(v, k1 + t, k2 + t) for v in basis]


def bw_rational(samples: SampleSet, k1: int, k2: int, t: int) -> BWResult:
    """Decode a degree-(k1, k2) rational from samples with at most t corruptions.

    Exact field only.  Needs n >= k1 + k2 + 2t + 1 samples; with that many
    points the recovered function is unique, and sample indices where it
    disagrees with the data are returned as error locations.
    """
    if samples.field != EXACT:
        raise UnsupportedFieldError(
            "decoding with corruptions is exact-field only; "
            "use fit_rational with trimming for float samples"
        )
    if k1 < 0 or k2 < 0 or t < 0:
        raise ValidationError("degrees and error budget must be nonnegative")
    needed = k1 + k2 + 2 * t + 1
    if len(samples) < needed:
        raise ValidationError(
            f"need at least {needed} samples for degrees ({k1},{k2}) "
            f"with t={t}, got {len(samples)}"
        )
    candidates = bw_quotient_candidates(samples, k1, k2, t)
    if not candidates:
        raise InfeasibleSystemError("decoder linear system has only the zero solution")
    f = candidates[0]
    if f.num.degree > k1 or f.den.degree > k2:
        raise TooManyErrorsError(
            f"recovered quotient has degrees {f.degrees}, exceeding ({k1},{k2}); "
            "more corruptions than the budget"
        )
    locations = []
    for i, (theta, value) in enumerate(samples):
        if f.den(theta).is_zero or f(theta) != value:
            locations.append(i)
    if len(locations) > t:
        raise TooManyErrorsError(
            f"{len(locations)} samples disagree with the decoded function; budget t={t}"
        )
    return BWResult(
        f=RationalFn(f.num, f.den, (k1, k2)),
        error_locations=tuple(locations),
    )


def extrapolate(f: RationalFn, theta):
    """Evaluate the recovered function outside the sampled window."""
    return f(theta)


# -- float least squares -------------------------------------------------------


def _smallest_singular_vector(a: np.ndarray) -> np.ndarray:
    _, _, vh = np.linalg.svd(a, full_matrices=True)
    return vh[-1].conj()


def _fit_rational_float(samples: SampleSet, k1: int, k2: int, trim: float) -> RationalFn:
    if not 0.0 <= trim < 1.0:
        raise ValidationError(f"trim fraction {trim} outside [0, 1)")
    thetas = np.array(samples.thetas(), dtype=float)
    values = np.array(samples.values(), dtype=complex)

    def solve(idx):
        th, va = thetas[idx], values[idx]
        pows = np.vander(th, max(k1, k2) + 1, increasing=True)
        a = np.hstack([pows[:, : k1 + 1], -va[:, None] * pows[:, : k2 + 1]])
        vec = _smallest_singular_vector(a)
        num = Poly.floating(vec[: k1 + 1])
        den = Poly.floating(vec[k1 + 1 :])
        if den.is_zero:
            raise RankDeficiencyError("least squares returned a zero denominator")
        return simplify(num, den, (k1, k2))

    idx = np.arange(len(samples))
    f = solve(idx)
    drop = int(round(trim * len(samples)))
    if drop:
        residuals = []
        for theta, value in samples:
            try:
                residuals.append(abs(f(theta) - value))
            except PoleError:
                residuals.append(np.inf)
        keep = np.argsort(residuals)[: len(samples) - drop]
        if len(keep) < k1 + k2 + 1:
            raise ValidationError("trimming leaves too few samples")
        f = solve(np.sort(keep))
    return f


@dataclass(frozen=True)
class ChebRationalModel:
    """Float rational model in a Chebyshev basis over an explicit domain."""

    domain: tuple
    num_coef: tuple
    den_coef: tuple
    degree: int

    def _x(self, theta):
        lo, hi = self.domain
        return (2.0 * np.asarray(theta, dtype=float) - (lo + hi)) / (hi - lo)

    def __call__(self, theta):
        x = self._x(theta)
        num = chebyshev.chebval(x, self.num_coef)
        den = chebyshev.chebval(x, self.den_coef)
        with np.errstate(divide="ignore", invalid="ignore"):
            return num / den

    def to_jsonable(self):
        return {
            "basis": "chebyshev",
            "domain": list(self.domain),
            "num_coef": list(self.num_coef),
            "den_coef": list(self.den_coef),
            "degree": self.degree,
        }


def fit_cheb_rational(thetas, values, degree: int, domain) -> ChebRationalModel:
    """Symmetric-degree linearized least squares in a Chebyshev basis.

    The domain may extend past the sampled points (e.g. up to the
    extrapolation target) so that basis polynomials stay bounded wherever the
    model will be evaluated.
    """
    thetas = np.asarray(thetas, dtype=float)
    values = np.asarray(values, dtype=float)
    if degree < 0:
        raise ValidationError("degree must be nonnegative")
    if len(thetas) < 2 * degree + 1:
        raise ValidationError(
            f"need at least {2 * degree + 1} points for symmetric degree {degree}"
        )
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ValidationError("empty fit domain")
    x = (2.0 * thetas - (lo + hi)) / (hi - lo)
    basis = chebyshev.chebvander(x, degree)
    a = np.hstack([basis, -values[:, None] * basis])
    vec = _smallest_singular_vector(a).real
    return ChebRationalModel(
        domain=(lo, hi),
        num_coef=tuple(vec[: degree + 1]),
        den_coef=tuple(vec[degree + 1 :]),
        degree=degree,
    )


def max_abs_residual(model, thetas, values) -> float:
    pred = np.asarray(model(np.asarray(thetas, dtype=float)))
    resid = np.abs(pred - np.asarray(values, dtype=float))
    if not np.all(np.isfinite(resid)):
        return float("inf")
    return float(np.max(resid)) if resid.size else 0.0
