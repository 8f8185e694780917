"""Exterior powers under restriction of scalars along a quadratic step K = F(phi).

Res_{K/F} W for W = K^D uses the F-basis (e_1, ..., e_D, phi e_1, ..., phi e_D),
indexed 0..2D-1.  Wedge bases are the lex-ordered index subsets.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Sequence

from .hermform import DiagonalHermitianForm, draw_lie_elements
from .linalg import ExactMatrix, Row
from .qfield import E0Element


def sort_with_sign(indices: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the sorting permutation and the sorted tuple; sign 0 on repeats."""
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return 0, tuple(idx)
    return sign, tuple(idx)


class WedgeSpace:
    """The l-th exterior power of a D-dimensional space with its lex basis."""

    def __init__(self, base_dim: int, degree: int, field: str = "F"):
        if not 0 <= degree <= base_dim:
            raise ValueError(f"degree {degree} out of range for dimension {base_dim}")
        self.base_dim = base_dim
        self.degree = degree
        self.field = field
        self.basis = tuple(combinations(range(base_dim), degree))
        self.index = {s: i for i, s in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"WedgeSpace(D={self.base_dim}, l={self.degree}, field={self.field})"


@dataclass(frozen=True)
class ScalarAction:
    """Multiplication by phi on Res_{K/F} K^D, where phi^2 = phi_square lies in F."""
    dim: int
    phi_square: object = Fraction(-1)

    @property
    def one(self):
        return self.phi_square * 0 + 1

    def apply_basis(self, k: int) -> tuple[int, object]:
        """phi * b_k as (index, coefficient)."""
        if k < self.dim:
            return k + self.dim, self.one
        return k - self.dim, self.phi_square

    @cached_property
    def matrix(self) -> ExactMatrix:
        D = self.dim
        rows: list[Row] = [{} for _ in range(2 * D)]
        for k in range(2 * D):
            j, c = self.apply_basis(k)
            rows[j][k] = c
        return ExactMatrix(2 * D, 2 * D, rows, self.one)


def _signed_basis_vector(space: WedgeSpace, indices, coeff) -> Row:
    sign, key = sort_with_sign(indices)
    if not sign:
        return {}
    return {space.index[key]: coeff if sign > 0 else -coeff}


def _add_into(acc: Row, vec: Row) -> None:
    for k, v in vec.items():
        t = acc.get(k)
        if t is None:
            acc[k] = v
        else:
            s = t + v
            if s:
                acc[k] = s
            else:
                del acc[k]


def _image_of_decomposable(vectors, scalar: ScalarAction, space: WedgeSpace) -> Row:
    """i(v_1 ^_K ... ^_K v_l) for basis vectors v_b = c_b * b_{k_b} of Res W.

    The image is 2^{-(l-1)} sum over even-size slot sets of phi^{-size} times the F-wedge
    with phi applied to those slots (the trace pairing kills odd sizes).
    """
    l = len(vectors)
    out: Row = {}
    scale = Fraction(1, 2 ** (l - 1)) * scalar.one
    for size in range(0, l + 1, 2):
        weight = scale / scalar.phi_square ** (size // 2) if size else scale
        for slots in combinations(range(l), size):
            idx = []
            coeff = weight
            for b, (k, c) in enumerate(vectors):
                if b in slots:
                    k, c2 = scalar.apply_basis(k)
                    c = c * c2
                idx.append(k)
                coeff = coeff * c
            _add_into(out, _signed_basis_vector(space, idx, coeff))
    return out


def restriction_injection(D: int, l: int, scalar: ScalarAction) -> ExactMatrix:
    """Matrix of Res_{K/F} (wedge^l_K W) -> wedge^l_F (Res_{K/F} W).

    Columns: e_I for I in lex order, then phi e_I.  Rows: the lex basis of
    wedge^l of the 2D-dimensional F-space.
    """
    if scalar.dim != D:
        raise ValueError("scalar action dimension mismatch")
    source = WedgeSpace(D, l, "K")
    target = WedgeSpace(2 * D, l, "F")
    one = scalar.one
    cols = []
    for I in source.basis:
        cols.append(_image_of_decomposable([(k, one) for k in I], scalar, target))
    for I in source.basis:
        # phi e_I = (phi e_{i_1}) ^ e_{i_2} ^ ...
        vecs = [(I[0] + D, one)] + [(k, one) for k in I[1:]]
        cols.append(_image_of_decomposable(vecs, scalar, target))
    return ExactMatrix.from_columns(target.dim, cols, one)


def phi_operator(D: int, m: int, scalar: ScalarAction) -> ExactMatrix:
    """phi_m: apply phi to exactly two slots, summed over the C(m, 2) choices."""
    if scalar.dim != D:
        raise ValueError("scalar action dimension mismatch")
    space = WedgeSpace(2 * D, m, "F")
    cols = []
    for J in space.basis:
        col: Row = {}
        for a, b in combinations(range(m), 2):
            idx = list(J)
            ka, ca = scalar.apply_basis(J[a])
            kb, cb = scalar.apply_basis(J[b])
            idx[a], idx[b] = ka, kb
            _add_into(col, _signed_basis_vector(space, idx, ca * cb))
        cols.append(col)
    return ExactMatrix.from_columns(space.dim, cols, scalar.one)


def kernel_operator(D: int, m: int, scalar: ScalarAction) -> ExactMatrix:
    """phi_m - C(m, 2) phi^2 Id."""
    phi_m = phi_operator(D, m, scalar)
    shift = scalar.phi_square * comb(m, 2)
    return phi_m - ExactMatrix.scalar(phi_m.nrows, shift, scalar.one)


def _rational_copy(mat: ExactMatrix):
    """The same matrix over Q if every entry is rational, else None."""
    rows = []
    for r in mat.rows:
        new = {}
        for k, v in r.items():
            if isinstance(v, E0Element):
                if v.b:
                    return None
                v = v.a
            if isinstance(v, Fraction) and v.denominator == 1:
                v = v.numerator
            new[k] = v
        rows.append(new)
    return ExactMatrix(mat.nrows, mat.ncols, rows, Fraction(1))


def exact_nullspace(mat: ExactMatrix) -> list[Row]:
    """Nullspace, computed over Q when the entries allow it (same span over E0)."""
    q = _rational_copy(mat)
    if q is None:
        return mat.nullspace()
    basis = [{k: (v.numerator if v.denominator == 1 else v) for k, v in vec.items()}
             for vec in q.nullspace()]
    if not isinstance(mat.one, E0Element):
        return basis
    return [{k: v * mat.one for k, v in vec.items()} for vec in basis]


def exact_rank(mat: ExactMatrix) -> int:
    q = _rational_copy(mat)
    return (q if q is not None else mat).rank()


@dataclass(frozen=True)
class KernelCheck:
    kernel_dim: int
    image_rank: int
    image_equals_kernel: bool


def kernel_characterization_check(D: int, m: int, scalar: ScalarAction) -> KernelCheck:
    """Compare ker(phi_m - C(m,2) phi^2) with the image of the injection.

    Equality is certified by: the operator kills every image column, and the
    kernel dimension equals the (full) column rank of the injection.
    """
    op = kernel_operator(D, m, scalar)
    kernel_dim = len(exact_nullspace(op))
    inj = restriction_injection(D, m, scalar)
    image_rank = exact_rank(inj)
    inside = (op @ inj).is_zero()
    return KernelCheck(kernel_dim, image_rank, inside and image_rank == kernel_dim)


def realify_over_base(mat: ExactMatrix, m: int) -> ExactMatrix:
    """An E0-matrix A + sqrt(m) B as a Q-matrix on (x, sqrt(m) x) coordinates: [[A, mB], [B, A]]."""
    A, B = split_sqrt(mat)
    mB = B.scale(m) if not B.is_zero() else B
    return ExactMatrix.block([[A, mB], [B, A]])


def restriction_chain(n: int, tower) -> ExactMatrix:
    """Res_{E/Q} wedge^n_E U -> Res_{E0/Q} wedge^n_E0 Res_{E/E0} U -> wedge^n_Q U', composed over Q.

    Both steps are quadratic: phi = sqrt(-e) over E0, then phi = sqrt(m) over Q.
    Coordinates of Res_{E0/Q} V are (x, sqrt(m) x) blocks, matching the second
    step's basis (e_1..e_2D, sqrt(m) e_1..sqrt(m) e_2D).
    """
    D = 2 * n
    phi_square = -tower.e
    if phi_square.is_rational:
        phi_square = phi_square.a
    first = restriction_injection(D, n, ScalarAction(D, phi_square))
    if tower.base.m is None:
        q = _rational_copy(first)
        assert q is not None
        return q
    m = tower.base.m
    second = restriction_injection(2 * D, n, ScalarAction(2 * D, Fraction(m)))
    lifted = realify_over_base(first, m)
    # the double restriction keeps the Q-dimension: 2 * 2 C(D, n) on both sides of step 2's source
    assert lifted.nrows == second.ncols and lifted.ncols == 4 * comb(D, n)
    return _rational_copy(second) @ lifted


# --- Lie algebra action -----------------------------------------------------------

def derivation_on_wedge(mat: ExactMatrix, degree: int) -> ExactMatrix:
    """Matrix of a matrix acting on wedge^degree as a derivation: sum over slots."""
    base = mat.nrows
    space = WedgeSpace(base, degree)
    mcols = mat.columns()
    cols = []
    for J in space.basis:
        col: Row = {}
        for t, j in enumerate(J):
            for r, c in mcols[j].items():
                idx = list(J)
                idx[t] = r
                _add_into(col, _signed_basis_vector(space, idx, c))
        cols.append(col)
    return ExactMatrix.from_columns(space.dim, cols, mat.one)


def realify(mat, phi_square) -> ExactMatrix:
    """An E-linear matrix A + phi B as an F-linear map on (e, phi e) coordinates."""
    size = len(mat)
    one = phi_square * 0 + 1
    rows: list[Row] = [{} for _ in range(2 * size)]
    for i in range(size):
        for j in range(size):
            a, b = mat[i][j].x, mat[i][j].y
            if a:
                rows[i][j] = a
                rows[i + size][j + size] = a
            if b:
                rows[i][j + size] = phi_square * b
                rows[i + size][j] = b
    return ExactMatrix(2 * size, 2 * size, rows, one)


def split_sqrt(mat: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
    """Rational matrices (A, B) with mat = A + sqrt(m) B."""
    ra: list[Row] = []
    rb: list[Row] = []
    for r in mat.rows:
        a, b = {}, {}
        for k, v in r.items():
            if isinstance(v, E0Element):
                x, y = v.a, v.b
            else:
                x, y = Fraction(v), 0
            if x:
                a[k] = x.numerator if x.denominator == 1 else x
            if y:
                b[k] = y.numerator if y.denominator == 1 else y
        ra.append(a)
        rb.append(b)
    return (ExactMatrix(mat.nrows, mat.ncols, ra), ExactMatrix(mat.nrows, mat.ncols, rb))


def lie_equivariance_check(D: int, m: int, form: DiagonalHermitianForm, samples: int, seed: int) -> bool:
    """Sampled elements of su(U, h) act on wedge^m_F Res_{E/E0} U commuting with phi_m.

    Also checks that each action maps ker(phi_m - C(m,2) phi^2) into itself.
    When phi^2 = -e is rational, phi_m and the kernel are rational, and the
    action A + sqrt(m) B passes both checks iff A and B each do.
    """
    if form.dim != D:
        raise ValueError(f"form has dimension {form.dim}, expected D = {D}")
    tower = form.tower
    phi_square = -tower.e
    rational = phi_square.is_rational
    if rational:
        phi_square = phi_square.a
    scalar = ScalarAction(D, phi_square)
    phi_m = phi_operator(D, m, scalar)
    op = kernel_operator(D, m, scalar)
    if rational:
        phi_m, op = _rational_copy(phi_m), _rational_copy(op)
    kernel = ExactMatrix.from_columns(op.nrows, exact_nullspace(op), scalar.one)
    for elem in draw_lie_elements(form, samples, seed):
        real = realify(elem, tower.e * -1)
        parts = split_sqrt(real) if rational else (real,)
        for part in parts:
            if part.is_zero():
                continue
            rho = derivation_on_wedge(part, m)
            if rho @ phi_m != phi_m @ rho:
                return False
            if not (op @ (rho @ kernel)).is_zero():
                return False
    return True
