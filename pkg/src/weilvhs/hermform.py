"""Diagonal E/E0-Hermitian forms with prescribed signatures at each real place."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import DegenerateSample, InvalidInput, SignatureUnrealizable, ZeroDiagonalEntry
from .qfield import (CMElement, CMField, E0Element, Embedding, TotallyRealField,
                     is_square_in_E0, sign_at_embedding)


def weil_violations(n: int, pairs: Sequence[tuple[int, int]]) -> list[str]:
    """Every way in which ``pairs`` fails to be of generalized Weil type.

    ``pairs[0]`` belongs to sigma_1.  An empty list means the signatures are
    valid: p_1 = q_1 = n and, for i >= 2, 0 < p_i < q_i, p_i + q_i = 2n and
    p_i = n (mod 2).
    """
    out = []
    if not isinstance(n, int) or n < 1:
        return [f"n must be a positive integer, got {n!r}"]
    if not pairs:
        return ["at least one signature pair is required"]
    for i, (p, q) in enumerate(pairs, start=1):
        if p + q != 2 * n:
            out.append(f"sigma_{i}: p + q = {p + q} != 2n = {2 * n}")
        if (p - n) % 2:
            out.append(f"sigma_{i}: parity violation, p = {p} is not congruent to n = {n} mod 2")
        if i == 1:
            if (p, q) != (n, n):
                out.append(f"sigma_1: need p_1 = q_1 = n = {n}, got ({p}, {q})")
        elif not 0 < p < q:
            out.append(f"sigma_{i}: need 0 < p < q, got ({p}, {q})")
    return out


@dataclass(frozen=True)
class SignatureSpec:
    """Signatures (p_i, q_i), stored sorted by decreasing p.

    ``order[k]`` is the 1-based embedding index that the k-th sorted pair
    belongs to, so the original labelling can always be recovered.
    """
    n: int
    pairs: tuple
    order: tuple
    weil: bool = True

    @classmethod
    def from_pairs(cls, n: int, pairs: Sequence[tuple[int, int]], override_weil: bool = False) -> "SignatureSpec":
        pairs = [tuple(int(x) for x in pq) for pq in pairs]
        if not isinstance(n, int) or n < 1:
            raise InvalidInput(f"n must be a positive integer, got {n!r}")
        if not pairs:
            raise InvalidInput("at least one signature pair is required")
        for i, (p, q) in enumerate(pairs, start=1):
            if p < 0 or q < 0 or p + q != 2 * n:
                raise InvalidInput(f"sigma_{i}: ({p}, {q}) is not a signature of a {2 * n}-dimensional form")
        problems = weil_violations(n, pairs)
        if problems and not override_weil:
            raise InvalidInput("; ".join(problems))
        order = sorted(range(len(pairs)), key=lambda i: -pairs[i][0])
        return cls(n, tuple(pairs[i] for i in order), tuple(i + 1 for i in order), not problems)

    @classmethod
    def from_p(cls, n: int, p_list: Sequence[int], override_weil: bool = False) -> "SignatureSpec":
        return cls.from_pairs(n, [(p, 2 * n - p) for p in p_list], override_weil)

    @property
    def d(self) -> int:
        return len(self.pairs)

    def original_pairs(self) -> list[tuple[int, int]]:
        out = [None] * self.d
        for pair, idx in zip(self.pairs, self.order):
            out[idx - 1] = pair
        return out

    def pair_for(self, embedding_index: int) -> tuple[int, int]:
        return self.original_pairs()[embedding_index - 1]


@dataclass(frozen=True)
class DiagonalHermitianForm:
    entries: tuple
    tower: CMField
    spec: Optional[SignatureSpec] = field(default=None, compare=False)

    def __post_init__(self):
        if any(not x for x in self.entries):
            raise ZeroDiagonalEntry("diagonal entries must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.entries)


def choose_deltas(spec: SignatureSpec, tower: CMField) -> list[E0Element]:
    """delta_k positive exactly at the embedding carrying the k-th sorted pair."""
    base = tower.base
    d = base.degree
    if spec.d != d:
        raise InvalidInput(f"{spec.d} signature pairs given but [E0:Q] = {d}")
    if d == 1:
        return [base.one()]
    root = base.sqrt_m()
    by_embedding = {1: root, 2: -root}
    return [by_embedding[i] for i in spec.order]


def build_form(spec: SignatureSpec, tower: CMField) -> DiagonalHermitianForm:
    """-1 (q_1 times), then (-1)^(i-1) delta_1...delta_i (q_{i+1}-q_i times), then +1 (p_d times)."""
    base = tower.base
    deltas = choose_deltas(spec, tower)
    qs = [q for _, q in spec.pairs]
    d = spec.d
    entries = [-base.one()] * qs[0]
    prod = base.one()
    for i in range(1, d):
        prod = prod * deltas[i - 1]
        value = prod if (i - 1) % 2 == 0 else -prod
        entries += [value] * (qs[i] - qs[i - 1])
    entries += [base.one()] * spec.pairs[-1][0]
    form = DiagonalHermitianForm(tuple(entries), tower, spec)
    for emb in base.embeddings():
        got = signature_at(form, emb)
        want = spec.pair_for(emb.index)
        if got != want:
            raise SignatureUnrealizable(f"{emb.label}: built signature {got}, wanted {want}")
    return form


def signature_at(form: DiagonalHermitianForm, emb: Embedding) -> tuple[int, int]:
    pos = neg = 0
    for x in form.entries:
        s = sign_at_embedding(x, emb)
        if s == 0:
            raise ZeroDiagonalEntry(f"entry {x} vanishes at {emb.label}")
        if s > 0:
            pos += 1
        else:
            neg += 1
    return pos, neg


def discriminant(form: DiagonalHermitianForm) -> E0Element:
    """det(h) as a representative of its class modulo norms."""
    out = form.tower.base.one()
    for x in form.entries:
        out = out * x
    return out


def rationality_criterion(form: DiagonalHermitianForm, n: int) -> tuple[bool, Optional[E0Element]]:
    target = discriminant(form) * (-1) ** n
    root = is_square_in_E0(target)
    return root is not None, root


def rescale_entry(form: DiagonalHermitianForm, index: int, z: CMElement) -> DiagonalHermitianForm:
    """Same form after the base change e_index -> z e_index (entry times Nm(z))."""
    entries = list(form.entries)
    entries[index] = entries[index] * z.norm()
    return DiagonalHermitianForm(tuple(entries), form.tower, form.spec)


# --- the Lie algebra su(U, h) ------------------------------------------------------

def _random_e0(base: TotallyRealField, rng: random.Random, height: int) -> E0Element:
    a = rng.randint(-height, height)
    b = rng.randint(-height, height) if base.m is not None else 0
    return base.element(a, b)


def sample_lie_element(form: DiagonalHermitianForm, rng: random.Random, height: int = 10) -> list[list[CMElement]]:
    """A random X in su(U, h): conj(X)^T H + H X = 0 and trace X = 0.

    With H = diag(h_i) the conditions read h_i X_ij = -h_j conj(X_ji), so the
    diagonal is purely imaginary with zero trace and the strict upper triangle
    determines the lower one.
    """
    tower = form.tower
    base = tower.base
    entries = form.entries
    size = len(entries)
    zero = tower.element(0, 0)
    elem = [[zero] * size for _ in range(size)]
    trace_free = [_random_e0(base, rng, height) for _ in range(size - 1)]
    last = base.zero()
    for t in trace_free:
        last = last - t
    for i, t in enumerate(trace_free + [last]):
        elem[i][i] = tower.element(0, t)
    for i in range(size):
        for j in range(i + 1, size):
            z = tower.element(_random_e0(base, rng, height), _random_e0(base, rng, height))
            elem[i][j] = z
            elem[j][i] = z.conjugate() * (-entries[i] / entries[j])
    if not any(v for row in elem for v in row):
        raise DegenerateSample("drew the zero element")
    return elem


def draw_lie_elements(form: DiagonalHermitianForm, count: int, seed: int, height: int = 10) -> list:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        try:
            out.append(sample_lie_element(form, rng, height))
        except DegenerateSample:
            continue
    return out


def is_in_su(form: DiagonalHermitianForm, elem) -> bool:
    diag = form.entries
    size = len(diag)
    trace = sum((elem[i][i] for i in range(1, size)), elem[0][0])
    if trace:
        return False
    return all(elem[i][j] * diag[i] + elem[j][i].conjugate() * diag[j] == 0
               for i in range(size) for j in range(size))
