"""The star operator on wedge^n_E U and the E0-form W_0 it cuts out.

Conjugate-linear maps are stored as E0-linear matrices on doubled coordinates:
a vector sum_I (x_I + y_I sqrt(-e)) e_I is the column (x_1..x_N, y_1..y_N).
An E-linear matrix A + sqrt(-e) B becomes [[A, -eB], [B, A]]; a
conjugate-linear w -> (A + sqrt(-e) B) conj(w) becomes [[A, eB], [B, -A]].
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb
from typing import Optional

from .errors import CriterionFailed
from .hermform import DiagonalHermitianForm, discriminant, draw_lie_elements, rationality_criterion
from .linalg import ExactMatrix, Row, hstack
from .qfield import CMField, E0Element, is_square_in_E0, sign_at_embedding
from .wedge import WedgeSpace, derivation_on_wedge, sort_with_sign


def koszul_sign(I, size: int) -> int:
    """Sign of the permutation sorting (I, complement of I) to (0, ..., size-1)."""
    rest = [k for k in range(size) if k not in I]
    return sort_with_sign(list(I) + rest)[0]


@dataclass(frozen=True)
class PairingMatrix:
    kind: str              # "WedgeTop" or "WedgePowerH"
    gram: ExactMatrix      # entries in E, lex wedge basis


def _minor_det(diag, I, J, one):
    """det(h(e_i, e_j))_{i in I, j in J} for diagonal h (Leibniz, sparse)."""
    total = one * 0
    if set(I) != set(J):
        return total    # some row of the minor vanishes
    cols = list(J)
    for perm in permutations(range(len(I))):
        term = one
        for a, b in enumerate(perm):
            if I[a] != cols[b]:
                term = None
                break
            term = term * diag[I[a]]
        if term is None:
            continue
        sign = sort_with_sign(perm)[0]
        total = total + (term if sign > 0 else -term)
    return total


def build_pairings(n: int, form: DiagonalHermitianForm) -> tuple[PairingMatrix, PairingMatrix]:
    """Gram matrices of (x, y) -> [x ^ y] and of wedge^n h, on wedge^n_E U.

    [x ^ y] is the coefficient of e_1 ^ ... ^ e_2n.
    """
    size = form.dim
    if size != 2 * n:
        raise ValueError(f"form has {size} entries, expected {2 * n}")
    tower = form.tower
    one = tower.one()
    space = WedgeSpace(size, n, "E")
    top_rows: list[Row] = [{} for _ in space.basis]
    for i, I in enumerate(space.basis):
        for j, J in enumerate(space.basis):
            s = sort_with_sign(I + J)[0]
            if s:
                top_rows[i][j] = one if s > 0 else -one
    diag = [tower.element(x, 0) for x in form.entries]
    pow_rows: list[Row] = [{} for _ in space.basis]
    for i, I in enumerate(space.basis):
        for j, J in enumerate(space.basis):
            val = _minor_det(diag, I, J, one)
            if val:
                pow_rows[i][j] = val
    size = space.dim
    return (PairingMatrix("WedgeTop", ExactMatrix(size, size, top_rows, one)),
            PairingMatrix("WedgePowerH", ExactMatrix(size, size, pow_rows, one)))


def double_e_linear(mat: ExactMatrix, e: E0Element) -> ExactMatrix:
    """E-linear size x size matrix over E -> 2N x 2N matrix over E0."""
    return _double(mat, e, conjugate=False)


def double_conjugate_linear(mat: ExactMatrix, e: E0Element) -> ExactMatrix:
    """Matrix of w -> mat * conj(w) on doubled coordinates."""
    return _double(mat, e, conjugate=True)


def _double(mat: ExactMatrix, e: E0Element, conjugate: bool) -> ExactMatrix:
    size = mat.nrows
    one = e * 0 + 1
    rows: list[Row] = [{} for _ in range(2 * size)]
    for i, r in enumerate(mat.rows):
        for j, z in r.items():
            a, b = z.x, z.y
            if a:
                rows[i][j] = a
                rows[size + i][size + j] = -a if conjugate else a
            if b:
                rows[i][size + j] = e * b if conjugate else -(e * b)
                rows[size + i][j] = b
    return ExactMatrix(2 * size, 2 * size, rows, one)


def doubled_scalar(z, size: int, e: E0Element) -> ExactMatrix:
    """Multiplication by z in E (or E0) on doubled coordinates."""
    x = getattr(z, "x", z)
    y = getattr(z, "y", e * 0)
    one = e * 0 + 1
    rows: list[Row] = [{} for _ in range(2 * size)]
    for i in range(size):
        if x:
            rows[i][i] = x
            rows[size + i][size + i] = x
        if y:
            rows[i][size + i] = -(e * y)
            rows[size + i][i] = y
    return ExactMatrix(2 * size, 2 * size, rows, one)


@dataclass(frozen=True)
class StarOperator:
    n: int
    matrix: ExactMatrix        # doubled, E0-linear
    e_matrix: ExactMatrix      # star(w) = e_matrix * conj(w), over E

    @property
    def wedge_dim(self) -> int:
        return self.e_matrix.nrows


def build_star(n: int, form: DiagonalHermitianForm) -> StarOperator:
    """star = tau_1^{-1} tau_2 with tau_1(y) = [ . ^ y] and tau_2(w) = (wedge^n h)( . , w).

    In coordinates tau_1 is the WedgeTop Gram matrix T and tau_2(w) = P conj(w)
    for the WedgePowerH Gram matrix P, so star(w) = T^{-1} P conj(w).
    """
    top, powh = build_pairings(n, form)
    coeffs = top.gram.inverse() @ powh.gram
    return StarOperator(n, double_conjugate_linear(coeffs, form.tower.e), coeffs)


def star_square_scalar(n: int, form: DiagonalHermitianForm) -> E0Element:
    return discriminant(form) * (-1) ** n


def verify_star_square(star: StarOperator, n: int, form: DiagonalHermitianForm) -> bool:
    """star o star == (-1)^n disc(h) Id, as an exact matrix identity."""
    target = doubled_scalar(star_square_scalar(n, form), star.wedge_dim, form.tower.e)
    return star.matrix @ star.matrix == target


@dataclass(frozen=True)
class RealForm:
    basis: ExactMatrix          # 2N x dim, columns span W_0 in doubled coordinates
    witness: E0Element          # c with star^2 = c^2
    dim: int
    spans: bool                 # W_0 + sqrt(-e) W_0 is everything and the sum is direct


def construct_real_form(star: StarOperator, n: int, form: DiagonalHermitianForm) -> RealForm:
    """W_0 = fixed points of the conjugate-linear involution c^{-1} star."""
    holds, c = rationality_criterion(form, n)
    if not holds:
        raise CriterionFailed(f"(-1)^{n} disc = {star_square_scalar(n, form)} is not a square in E0")
    size = star.wedge_dim
    e = form.tower.e
    sigma = star.matrix.scale(1 / c)
    fixed = sigma - ExactMatrix.identity(2 * size, star.matrix.one)
    vecs = fixed.nullspace()
    basis = ExactMatrix.from_columns(2 * size, vecs, star.matrix.one)
    i_basis = doubled_scalar(form.tower.sqrt_neg_e(), size, e) @ basis
    spans = hstack([basis, i_basis]).rank() == 2 * size
    return RealForm(basis, c, len(vecs), spans)


def sigma_matrix(star: StarOperator, witness: E0Element) -> ExactMatrix:
    return star.matrix.scale(1 / witness)


def wedge_action(elem, n: int, tower: CMField) -> ExactMatrix:
    """Derivation action of X in gl(U) on wedge^n_E U, doubled to E0 coordinates."""
    mat = ExactMatrix.from_dense(elem, one=tower.one())
    return double_e_linear(derivation_on_wedge(mat, n), tower.e)


def star_equivariance_check(star: StarOperator, form: DiagonalHermitianForm, samples: int, seed: int) -> bool:
    """star commutes with the wedge^n action of sampled elements of su(U, h)."""
    for elem in draw_lie_elements(form, samples, seed):
        rho = wedge_action(elem, star.n, form.tower)
        if star.matrix @ rho != rho @ star.matrix:
            return False
    return True


def real_form_invariance_check(star: StarOperator, real: RealForm, form: DiagonalHermitianForm,
                               samples: int, seed: int) -> bool:
    """Every sampled Lie element maps W_0 into W_0."""
    fixed = sigma_matrix(star, real.witness) - ExactMatrix.identity(2 * star.wedge_dim, star.matrix.one)
    for elem in draw_lie_elements(form, samples, seed):
        rho = wedge_action(elem, star.n, form.tower)
        if not (fixed @ (rho @ real.basis)).is_zero():
            return False
    return True


@dataclass(frozen=True)
class QuaternionReport:
    i_square: E0Element         # -e
    j_square: E0Element         # star^2
    anticommute: bool
    verdict: str                # "split", "non-split" or "undetermined"
    witness: Optional[E0Element]


def quaternion_split_report(n: int, form: DiagonalHermitianForm, tower: CMField,
                            star: StarOperator | None = None) -> QuaternionReport:
    """Quaternion algebra (-e, star^2) over E0 spanned by Id, sqrt(-e), star, sqrt(-e) star.

    A square j^2 = c^2 = Nm(c) splits it.  Norms from E are totally positive,
    so j^2 negative somewhere means non-split; anything else is left open.
    """
    if star is None:
        star = build_star(n, form)
    size = star.wedge_dim
    i_mat = doubled_scalar(tower.sqrt_neg_e(), size, tower.e)
    anti = i_mat @ star.matrix == -(star.matrix @ i_mat)
    j2 = star_square_scalar(n, form)
    root = is_square_in_E0(j2)
    if root is not None:
        verdict = "split"
    elif any(sign_at_embedding(j2, emb) < 0 for emb in tower.base.embeddings()):
        verdict = "non-split"
    else:
        verdict = "undetermined"
    return QuaternionReport(-tower.e, j2, anti, verdict, root)


def expected_real_form_dim(n: int) -> int:
    return comb(2 * n, n)


def wedge_basis(n: int) -> list[tuple]:
    return list(combinations(range(2 * n), n))
