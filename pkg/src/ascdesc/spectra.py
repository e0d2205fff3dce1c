"""Eigenvalue enumeration and ascent/descent spectra for exact matrices.

Eigenvalues are found exactly as roots of the characteristic polynomial
inside the Gaussian rationals; roots living in larger extensions are
reported through a residual degree instead of being approximated.  For
a finite-dimensional operator every point has finite ascent and
descent, so both spectra are empty; the profile table carries the
per-eigenvalue indices that remain meaningful.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import sympy

from .chains import chain_report
from .exact import Matrix, char_poly, poly_of_matrix
from .gq import GQ, GaussianRational, format_scalar

CERT_FINITE_DIM = "finite-dim-stabilization"


@dataclass(frozen=True)
class ProfilePoint:
    """Ascent/descent indices of T - lambda at one point."""

    lam: GaussianRational
    asc: int | str
    dsc: int | str
    alpha: int | str
    beta: int | str

    def to_obj(self) -> dict:
        return {
            "lambda": format_scalar(self.lam),
            "asc": self.asc,
            "dsc": self.dsc,
            "alpha": self.alpha,
            "beta": self.beta,
        }


@dataclass(frozen=True)
class SpectrumProfile:
    """Point profiles plus the (possibly empty) spectrum itself."""

    complete: bool
    points: tuple[ProfilePoint, ...]
    sigma_asc: tuple[GaussianRational, ...]
    sigma_dsc: tuple[GaussianRational, ...]
    certificate: str

    def to_obj(self) -> dict:
        return {
            "complete": self.complete,
            "points": [p.to_obj() for p in self.points],
            "sigma_asc": [format_scalar(v) for v in self.sigma_asc],
            "sigma_dsc": [format_scalar(v) for v in self.sigma_dsc],
            "certificate": self.certificate,
        }


def _coeff_to_sympy(c: GaussianRational):
    return sympy.Rational(c.re_num, c.re_den) + sympy.Rational(c.im_num, c.im_den) * sympy.I


def _root_from_expr(expr) -> GaussianRational:
    re_part, im_part = expr.as_real_imag()
    re_q = sympy.Rational(re_part)
    im_q = sympy.Rational(im_part)
    return GQ(Fraction(re_q.p, re_q.q), Fraction(im_q.p, im_q.q))


@lru_cache(maxsize=512)
def eigenvalue_multiplicities(t: Matrix) -> tuple[tuple[tuple[GaussianRational, int], ...], int]:
    """Roots of char(T) in Q(i) with multiplicities, plus residual degree.

    The characteristic polynomial is factored exactly over the Gaussian
    rationals; the residual degree counts the part that does not split
    (0 means the polynomial splits completely).
    """
    coeffs = char_poly(t)
    n = t.rows
    if n == 0:
        return (), 0
    x = sympy.Symbol("x")
    expr = sum(_coeff_to_sympy(c) * x**k for k, c in enumerate(coeffs))
    poly = sympy.Poly(expr, x, domain="QQ_I")
    _, factors = poly.factor_list()
    roots: list[tuple[GaussianRational, int]] = []
    residual = 0
    for fac, mult in factors:
        if fac.degree() == 1:
            c1, c0 = fac.all_coeffs()
            roots.append((_root_from_expr(-c0 / c1), int(mult)))
        else:
            residual += fac.degree() * int(mult)
    roots.sort(key=lambda rm: rm[0].sort_key())
    return tuple(roots), residual


def eigenvalues_exact(t: Matrix) -> tuple[tuple[GaussianRational, ...], int]:
    """Distinct Q(i)-eigenvalues in canonical order, with residual degree."""
    if not t.is_square:
        raise ValueError("eigenvalues require a square matrix")
    roots, residual = eigenvalue_multiplicities(t)
    return tuple(r for r, _ in roots), residual


def point_profile(t: Matrix, lam) -> tuple[int, int, int, int]:
    """(asc, dsc, alpha, beta) of T - lambda."""
    rep = chain_report(t.shifted(lam))
    return rep.asc, rep.dsc, rep.alpha, rep.beta


def _profile(t: Matrix) -> SpectrumProfile:
    values, residual = eigenvalues_exact(t)
    points = []
    for lam in values:
        asc, dsc, alpha, beta = point_profile(t, lam)
        points.append(ProfilePoint(lam, asc, dsc, alpha, beta))
    return SpectrumProfile(
        complete=residual == 0,
        points=tuple(points),
        sigma_asc=(),
        sigma_dsc=(),
        certificate=CERT_FINITE_DIM,
    )


def ascent_spectrum(t: Matrix) -> SpectrumProfile:
    """Always empty for a dense matrix: chains stabilize by dim X.

    The accompanying profile table lists asc(T - lambda) at every exact
    eigenvalue so profile-level statements stay checkable.
    """
    return _profile(t)


def descent_spectrum(t: Matrix) -> SpectrumProfile:
    """Empty, with the same stabilization certificate and profile table."""
    return _profile(t)


def poly_spectral_map_check(t: Matrix, coeffs) -> bool | None:
    """Eigenvalue multiset of p(T) versus p of the eigenvalue multiset.

    Returns None (inconclusive) when the characteristic polynomial does
    not split over the Gaussian rationals.
    """
    roots, residual = eigenvalue_multiplicities(t)
    if residual:
        return None
    coeff_list = [c if isinstance(c, GaussianRational) else GQ(c) for c in coeffs]
    mapped = Counter()
    for lam, mult in roots:
        value = GQ(0)
        for c in reversed(coeff_list):
            value = value * lam + c
        mapped[value] += mult
    image_roots, image_residual = eigenvalue_multiplicities(poly_of_matrix(coeff_list, t))
    if image_residual:
        return None
    return Counter(dict(image_roots)) == mapped
