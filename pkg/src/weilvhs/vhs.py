"""The full construction: abelian layer, CY sub-VHS Hodge numbers, and every check."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Optional

from . import hermform, rootweights, starform, wedge
from .errors import InvalidInput, ParityError, WeilVHSError
from .hermform import SignatureSpec
from .linalg import ExactMatrix
from .qfield import CMField, E0Element, eigenspace_decompose
from .rootweights import DomainLabel, HodgeVector


@dataclass(frozen=True)
class ConstructionParams:
    n: int
    tower: CMField
    spec: SignatureSpec
    seed: int = 1
    override_weil: bool = False
    samples: int = 25

    @classmethod
    def build(cls, n: int, tower: CMField, p_list, seed: int = 1, override_weil: bool = False,
              samples: int = 25) -> "ConstructionParams":
        spec = SignatureSpec.from_p(n, p_list, override_weil)
        if spec.d != tower.d:
            raise InvalidInput(f"{spec.d} signature pairs given but [E0:Q] = {tower.d}")
        return cls(n, tower, spec, seed, override_weil, samples)

    @property
    def d(self) -> int:
        return self.tower.d


def validate_weil(params: ConstructionParams) -> list[str]:
    return hermform.weil_violations(params.n, params.spec.original_pairs())


@dataclass(frozen=True)
class Summand:
    embedding: int
    highest_weight: str     # "varpi_1" or "varpi_{2n-1}"
    dimension: int


@dataclass(frozen=True)
class AbelianLayer:
    dim_q: int
    h10: int
    h01: int
    summands: tuple
    eigenspace_dims: tuple       # E0-dimension of each sigma_i-piece of U'
    one_nontrivial_factor: bool
    highest_weights_allowed: bool
    abelian_type_pieces: tuple   # embeddings i >= 2 with n odd and p_i = 1


def _generator_action(n: int, base) -> ExactMatrix:
    """Multiplication by the generator of E0 on U' = Res_{E0/Q} U as a Q-matrix."""
    dim_e0 = 4 * n                         # Res_{E/E0} U
    if base.m is None:
        return ExactMatrix.identity(dim_e0)
    m = Fraction(base.m)
    rows = [{} for _ in range(2 * dim_e0)]
    for k in range(dim_e0):
        # coordinates (a_k, b_k) of a_k + b_k sqrt(m); companion matrix of x^2 - m
        rows[2 * k][2 * k + 1] = m
        rows[2 * k + 1][2 * k] = Fraction(1)
    return ExactMatrix(2 * dim_e0, 2 * dim_e0, rows)


def abelian_layer_report(params: ConstructionParams) -> AbelianLayer:
    n, d = params.n, params.d
    action = _generator_action(n, params.tower.base)
    pieces = eigenspace_decompose(action.nrows, action, params.tower.base)
    eig_dims = tuple(len(p.basis) for p in pieces)
    summands = []
    for piece in pieces:
        i = piece.embedding.index
        summands.append(Summand(i, "varpi_1", 2 * n))
        summands.append(Summand(i, f"varpi_{2 * n - 1}", 2 * n))
    # each U_{i,+-} is the standard rep (or its dual) of the sigma_i factor only
    one_factor = all(s.embedding in range(1, d + 1) for s in summands) and len(summands) == 2 * d
    allowed = True
    for s in summands:
        p, _ = params.spec.pair_for(s.embedding)
        if 2 <= p <= 2 * n - 2 and s.highest_weight not in ("varpi_1", f"varpi_{2 * n - 1}"):
            allowed = False
    abelian = tuple(i for i, (p, _) in enumerate(params.spec.original_pairs(), start=1)
                    if i >= 2 and n % 2 == 1 and p == 1)
    dim_q = 4 * n * d
    return AbelianLayer(dim_q, dim_q // 2, dim_q // 2, tuple(summands), eig_dims,
                        one_factor, allowed, abelian)


def place_in_weight(piece: HodgeVector, n: int, p: int) -> HodgeVector:
    """Put a level-p piece into weight n, symmetric about n/2.

    A weight with 2 xi(H_0) = t lands in h^{a, n-a} with 2a - n = t.
    """
    if (n - p) % 2:
        raise ParityError(f"n - p = {n - p} is odd; a level-{p} piece has no place in weight {n}")
    nums = [0] * (n + 1)          # indexed by a
    for a_old in range(piece.weight + 1):
        count = piece[a_old]
        if not count:
            continue
        t = 2 * a_old - piece.weight
        a = (n + t) // 2
        if not 0 <= a <= n:
            raise ParityError(f"level {piece.level} exceeds weight {n}")
        nums[a] += count
    return HodgeVector(n, tuple(reversed(nums)), piece.level)


def hodge_pieces(n: int, p_list) -> tuple[list[HodgeVector], HodgeVector]:
    """Hodge numbers of each level-p piece placed in weight n, and their sum."""
    pieces = [place_in_weight(rootweights.hodge_numbers(DomainLabel(n, p)), n, p) for p in p_list]
    combined = tuple(sum(col) for col in zip(*(pc.numbers for pc in pieces)))
    level = max(pc.level for pc in pieces)
    return pieces, HodgeVector(n, combined, level)


def cy_hodge_numbers(params: ConstructionParams) -> tuple[list[HodgeVector], HodgeVector]:
    """Per-embedding Hodge numbers of W_0 tensor_{sigma_i} R in weight n, and their sum."""
    return hodge_pieces(params.n, [p for p, _ in params.spec.original_pairs()])


@dataclass
class PipelineReport:
    n: int
    d: int
    tower: CMField
    seed: int
    samples: int
    pairs: list
    violations: list
    entries: list = field(default_factory=list)
    signatures: dict = field(default_factory=dict)
    discriminant: Optional[E0Element] = None
    witness: Optional[E0Element] = None
    star_square: Optional[E0Element] = None
    quaternion: Optional[starform.QuaternionReport] = None
    real_form_dim: Optional[int] = None
    kernel: Optional[wedge.KernelCheck] = None
    abelian: Optional[AbelianLayer] = None
    pieces: list = field(default_factory=list)
    combined: Optional[HodgeVector] = None
    endomorphism_degree: Optional[int] = None
    flags: dict = field(default_factory=dict)
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and bool(self.flags) and all(self.flags.values())


def run_pipeline(params: ConstructionParams) -> PipelineReport:
    """Run every construction and check; failures are recorded, never raised."""
    n, d, tower = params.n, params.d, params.tower
    rep = PipelineReport(n, d, tower, params.seed, params.samples,
                         params.spec.original_pairs(), validate_weil(params))
    flags = rep.flags
    flags["generalized_weil"] = not rep.violations

    def attempt(name, fn):
        try:
            return fn()
        except WeilVHSError as exc:
            flags[name] = False
            rep.errors.append(f"{name}: {exc}")
            return None

    form = attempt("signatures", lambda: hermform.build_form(params.spec, tower))
    if form is None:
        return rep
    rep.entries = list(form.entries)
    for emb in tower.base.embeddings():
        rep.signatures[emb.index] = hermform.signature_at(form, emb)
    flags["signatures"] = all(rep.signatures[i] == params.spec.pair_for(i) for i in rep.signatures)
    rep.discriminant = hermform.discriminant(form)
    holds, rep.witness = hermform.rationality_criterion(form, n)
    flags["rationality"] = holds

    star = starform.build_star(n, form)
    rep.star_square = starform.star_square_scalar(n, form)
    flags["star_square"] = starform.verify_star_square(star, n, form)
    rep.quaternion = starform.quaternion_split_report(n, form, tower, star)
    flags["quaternion_anticommute"] = rep.quaternion.anticommute

    real = None
    if holds:
        real = attempt("real_form", lambda: starform.construct_real_form(star, n, form))
    if real is not None:
        rep.real_form_dim = real.dim
        flags["real_form"] = real.dim == comb(2 * n, n) and real.spans
    else:
        flags["real_form"] = False

    if d == 1:
        scalar = wedge.ScalarAction(2 * n, -tower.e.a)
        rep.kernel = wedge.kernel_characterization_check(2 * n, n, scalar)
        flags["kernel"] = (rep.kernel.image_equals_kernel
                           and rep.kernel.kernel_dim == 2 * comb(2 * n, n))

    flags["lie_equivariance"] = wedge.lie_equivariance_check(2 * n, n, form, params.samples, params.seed)
    flags["star_equivariance"] = starform.star_equivariance_check(star, form, params.samples, params.seed)
    if real is not None:
        flags["real_form_invariance"] = starform.real_form_invariance_check(
            star, real, form, params.samples, params.seed)

    rep.abelian = abelian_layer_report(params)
    flags["abelian_layer"] = (rep.abelian.one_nontrivial_factor and rep.abelian.highest_weights_allowed
                              and rep.abelian.eigenspace_dims == (4 * n,) * d)

    hodge = attempt("hodge", lambda: cy_hodge_numbers(params))
    if hodge is not None:
        rep.pieces, rep.combined = hodge
        rep.endomorphism_degree = len(rep.pieces)
        flags["cy"] = rep.combined[n] == 1
        flags["hodge_total"] = rep.combined.total == d * comb(2 * n, n)
        flags["endomorphism_degree"] = rep.endomorphism_degree == d
    return rep
