"""Kernel/range chains, ascent and descent, and related decompositions.

The ascent of a square matrix T is the first k with N(T^k) = N(T^k+1);
the descent is the first k with R(T^k) = R(T^k+1).  Both chains are
monotone, so dimension comparisons decide subspace equality, and both
stabilize no later than the ambient dimension.  The two chains are
computed through independent eliminations (kernel of the power versus
column space of the power) and never assume they stabilize together.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exact import (
    Matrix,
    Subspace,
    block_diag,
    cached_image,
    cached_kernel,
    image_basis,
    kernel_basis,
    power_chain,
    solve_exact,
    subspace_intersection,
    subspace_sum,
)


@dataclass(frozen=True)
class ChainReport:
    """Chain dimensions and stabilization indices for one operator.

    kernel_dims[k] = dim N(T^k) is non-decreasing, range_dims[k] =
    dim R(T^k) is non-increasing, and the two add up to the ambient
    dimension at every k.  Lists run one step past stabilization.
    """

    kernel_dims: tuple[int, ...]
    range_dims: tuple[int, ...]
    asc: int
    dsc: int
    alpha: int
    beta: int

    def to_obj(self) -> dict:
        return {
            "kernel_dims": list(self.kernel_dims),
            "range_dims": list(self.range_dims),
            "asc": self.asc,
            "dsc": self.dsc,
            "alpha": self.alpha,
            "beta": self.beta,
        }


def chain_report(t: Matrix) -> ChainReport:
    """Kernel and range chains of T up to stabilization."""
    if not t.is_square:
        raise ValueError("chain_report requires a square matrix")
    d = t.rows
    kernel_dims: list[int] = []
    range_dims: list[int] = []
    asc = dsc = None
    k = 0
    power = Matrix.identity(d)
    while True:
        kernel_dims.append(cached_kernel(power).dim)
        range_dims.append(cached_image(power).dim)
        if k > 0:
            if asc is None and kernel_dims[k] == kernel_dims[k - 1]:
                asc = k - 1
            if dsc is None and range_dims[k] == range_dims[k - 1]:
                dsc = k - 1
            if asc is not None and dsc is not None:
                break
        if k > d:
            raise RuntimeError("chain failed to stabilize by the ambient dimension")
        power = power @ t
        k += 1
    alpha = kernel_dims[1] if len(kernel_dims) > 1 else 0
    beta = d - range_dims[1] if len(range_dims) > 1 else 0
    return ChainReport(tuple(kernel_dims), tuple(range_dims), asc, dsc, alpha, beta)


@dataclass(frozen=True)
class AscentCheck:
    """Outcome of the range/kernel intersection test at index m."""

    holds: bool
    witness: tuple | None  # nonzero vector in R(T^m) ∩ N(T^d) when false


def prop_asc_predicate(t: Matrix, m: int) -> AscentCheck:
    """True iff R(T^m) ∩ N(T^d) = {0}, d the ambient dimension.

    The kernel chain stabilizes by d, so intersecting against N(T^d)
    covers every exponent at once.  Equivalent to asc(T) <= m.
    """
    if not t.is_square:
        raise ValueError("prop_asc_predicate requires a square matrix")
    d = t.rows
    powers = power_chain(t, max(m, d))
    r_m = cached_image(powers[m])
    n_d = cached_kernel(powers[d])
    meet = subspace_intersection(r_m, n_d)
    if meet.is_zero():
        return AscentCheck(True, None)
    return AscentCheck(False, meet.basis.row(0))


@dataclass(frozen=True)
class DescentCheck:
    """Outcome of the complement-in-kernel test at index m.

    On success, ``witnesses[n]`` is a subspace Y_n inside N(T^m) with
    X = Y_n ⊕ R(T^n), for every n up to the ambient dimension.
    """

    holds: bool
    witnesses: tuple[tuple[int, Subspace], ...]
    failing_n: int | None = None


def prop_dsc_predicate(t: Matrix, m: int) -> DescentCheck:
    """True iff N(T^m) + R(T^n) = X for every n <= dim; builds witnesses.

    Witness construction: extend a basis of N(T^m) ∩ R(T^n) to a basis
    of N(T^m); the added vectors span a complement Y_n of R(T^n).  The
    direct-sum identity X = Y_n ⊕ R(T^n) is re-verified before return.
    Equivalent to dsc(T) <= m.
    """
    if not t.is_square:
        raise ValueError("prop_dsc_predicate requires a square matrix")
    d = t.rows
    powers = power_chain(t, max(m, d))
    n_m = cached_kernel(powers[m])
    witnesses: list[tuple[int, Subspace]] = []
    for n in range(d + 1):
        r_n = cached_image(powers[n])
        if subspace_sum(n_m, r_n).dim != d:
            return DescentCheck(False, tuple(witnesses), failing_n=n)
        meet = subspace_intersection(n_m, r_n)
        y_n = _extend_within(meet, n_m)
        if y_n.dim + r_n.dim != d or subspace_sum(y_n, r_n).dim != d:
            raise RuntimeError("witness construction failed the direct-sum check")
        witnesses.append((n, y_n))
    return DescentCheck(True, tuple(witnesses))


def _extend_within(inner: Subspace, outer: Subspace) -> Subspace:
    """Span of outer-basis vectors extending a basis of inner to outer."""
    working = [list(r) for r in inner.basis_rows()]
    extension: list[tuple] = []
    for row in outer.basis_rows():
        vec = list(row)
        vec = _reduce_against(vec, working)
        if any(vec):
            extension.append(row)
            working.append(vec)
    return Subspace.from_spanning_rows(outer.ambient_dim, extension)


def _reduce_against(vec: list, rows: list[list]) -> list:
    for row in rows:
        piv = next((j for j, v in enumerate(row) if v), None)
        if piv is None:
            continue
        f = vec[piv] / row[piv]
        if f:
            vec = [x - f * y if y else x for x, y in zip(vec, row)]
    return vec


def compression(t: Matrix, p: Matrix) -> Matrix:
    """Matrix of y -> PTy on R(P), in the canonical basis of R(P).

    The basis is the reduced row-echelon basis of the column space of
    P, taken as columns.  Requires P idempotent (exactly)."""
    if not t.is_square or not p.is_square or t.rows != p.rows:
        raise ValueError("compression requires square matrices of equal size")
    if p @ p != p:
        raise ValueError("projection must be idempotent")
    basis = image_basis(p)
    r = basis.dim
    if r == 0:
        return Matrix.zeros(0, 0)
    cols = Matrix.from_rows(basis.basis_rows()).transpose()  # d x r
    mapped = p @ (t @ cols)
    return solve_exact(cols, mapped)


def ptp_block_form(t: Matrix, p: Matrix) -> tuple[Matrix, Matrix]:
    """PTP in a basis adapted to X = R(P) ⊕ N(P), plus the basis change.

    For commuting idempotent P the result is block-diagonal with the
    compression in the leading block and zero elsewhere; the conjugation
    identity is verified exactly before returning.
    """
    if not t.is_square or not p.is_square or t.rows != p.rows:
        raise ValueError("block form requires square matrices of equal size")
    if p @ p != p:
        raise ValueError("projection must be idempotent")
    if t @ p != p @ t:
        raise ValueError("projection must commute with the operator")
    d = t.rows
    range_part = image_basis(p)
    null_part = kernel_basis(p)
    columns = range_part.basis_rows() + null_part.basis_rows()
    v = Matrix.from_rows(columns).transpose() if columns else Matrix.zeros(d, 0)
    block = solve_exact(v, (p @ t @ p) @ v)
    expected = block_diag(compression(t, p), Matrix.zeros(null_part.dim, null_part.dim))
    if block != expected:
        raise RuntimeError("block form does not match the compression")
    return block, v


def direct_sum(t1: Matrix, t2: Matrix) -> Matrix:
    """Block-diagonal sum; chains combine by taking maxima blockwise."""
    if not t1.is_square or not t2.is_square:
        raise ValueError("direct_sum requires square matrices")
    return block_diag(t1, t2)
