"""Exact arithmetic in the tower Q <= E0 <= E.

E0 is Q or a real quadratic field Q(sqrt m); E = E0(sqrt(-e)) with e totally
positive.  Elements are stored in coordinates, ``a + b*sqrt(m)`` for E0 and
``x + y*sqrt(-e)`` for E, with Fraction coordinates.  Nothing in here ever
touches floating point except :meth:`E0Element.approx`, which exists for
human-readable output only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional

from .errors import InvalidAction, InvalidInput
from .linalg import ExactMatrix


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def is_squarefree(m: int) -> bool:
    if m < 2:
        return False
    k = 2
    while k * k <= m:
        if m % (k * k) == 0:
            return False
        k += 1
    return True


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Nonnegative rational square root of q, or None."""
    q = _frac(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Embedding:
    """A real embedding of E0; ``sqrtm_sign`` is the sign given to sqrt(m)."""
    index: int
    sqrtm_sign: int = 1

    def __post_init__(self):
        if self.index == 1 and self.sqrtm_sign != 1:
            raise InvalidInput("embedding sigma_1 sends sqrt(m) to the positive root")
        if self.sqrtm_sign not in (1, -1):
            raise InvalidInput("sqrtm_sign must be +1 or -1")

    @property
    def label(self) -> str:
        return f"sigma_{self.index}"


class E0Element:
    """``a + b*sqrt(m)``; for E0 = Q we use m = 1 and b is always 0."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a=0, b=0, m: int = 1):
        a = _frac(a)
        b = _frac(b)
        if m == 1 and b:
            raise InvalidInput("E0 = Q has no sqrt(m) coordinate")
        self.a = a
        self.b = b
        self.m = m

    # coercion: ints, Fractions and rational elements mix with anything
    def _coerce(self, other):
        if isinstance(other, E0Element):
            if other.m == self.m:
                return other, self.m
            if other.m == 1 or not other.b:
                return other, self.m
            if self.m == 1 or not self.b:
                return other, other.m
            raise InvalidInput(f"cannot mix Q(sqrt {self.m}) with Q(sqrt {other.m})")
        if isinstance(other, (int, Fraction)):
            return E0Element(other, 0, 1), self.m
        return None, None

    def __add__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        return E0Element(self.a + o.a, self.b + o.b, m)

    __radd__ = __add__

    def __neg__(self):
        return E0Element(-self.a, -self.b, self.m)

    def __sub__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        return E0Element(self.a - o.a, self.b - o.b, m)

    def __rsub__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        return E0Element(o.a - self.a, o.b - self.b, m)

    def __mul__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.b and not o.b:
            return E0Element(self.a * o.a, 0, m)
        return E0Element(self.a * o.a + m * self.b * o.b, self.a * o.b + self.b * o.a, m)

    __rmul__ = __mul__

    def conjugate(self) -> "E0Element":
        """Galois conjugate sqrt(m) -> -sqrt(m)."""
        return E0Element(self.a, -self.b, self.m)

    def norm(self) -> Fraction:
        """Norm down to Q."""
        return self.a * self.a - self.m * self.b * self.b

    def inverse(self) -> "E0Element":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if not self.b:
            return E0Element(1 / self.a, 0, self.m)
        nm = self.norm()
        return E0Element(self.a / nm, -self.b / nm, self.m)

    def __truediv__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.b:
            if not o.a:
                raise ZeroDivisionError("division by zero")
            return E0Element(self.a / o.a, self.b / o.a, m)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o, m = self._coerce(other)
        if o is None:
            return NotImplemented
        return E0Element(o.a, o.b, m) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = E0Element(1, 0, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, E0Element):
            return self.a == other.a and self.b == other.b and (not self.b or self.m == other.m)
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash(self.a) if not self.b else hash((self.a, self.b, self.m))

    @property
    def is_rational(self) -> bool:
        return not self.b

    def sign(self, emb: Embedding) -> int:
        return sign_at_embedding(self, emb)

    def approx(self, emb: Embedding | None = None) -> float:
        s = 1 if emb is None else emb.sqrtm_sign
        return float(self.a) + s * float(self.b) * (self.m ** 0.5 if self.b else 0.0)

    def __repr__(self) -> str:
        if not self.b:
            return f"E0({self.a})"
        return f"E0({self.a} + {self.b}*sqrt({self.m}))"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        root = f"sqrt({self.m})"
        b = self.b
        if b == 1:
            tail = root
        elif b == -1:
            tail = "-" + root
        else:
            tail = f"{b}*{root}"
        if not self.a:
            return tail
        return f"{self.a} + {tail}" if not tail.startswith("-") else f"{self.a} - {tail[1:]}"


@dataclass(frozen=True)
class TotallyRealField:
    """Q (m = None) or Q(sqrt m) with m square-free and at least 2."""
    m: Optional[int] = None

    def __post_init__(self):
        if self.m is not None and not is_squarefree(self.m):
            raise InvalidInput(f"m = {self.m} is not a square-free integer >= 2")

    @classmethod
    def rationals(cls) -> "TotallyRealField":
        return cls(None)

    @classmethod
    def real_quadratic(cls, m: int) -> "TotallyRealField":
        return cls(m)

    @property
    def kind(self) -> str:
        return "RationalField" if self.m is None else "RealQuadratic"

    @property
    def degree(self) -> int:
        return 1 if self.m is None else 2

    @property
    def _m(self) -> int:
        return 1 if self.m is None else self.m

    def embeddings(self) -> list[Embedding]:
        if self.m is None:
            return [Embedding(1, 1)]
        return [Embedding(1, 1), Embedding(2, -1)]

    def element(self, a=0, b=0) -> E0Element:
        return E0Element(a, b, self._m)

    def one(self) -> E0Element:
        return E0Element(1, 0, self._m)

    def zero(self) -> E0Element:
        return E0Element(0, 0, self._m)

    def sqrt_m(self) -> E0Element:
        if self.m is None:
            raise InvalidInput("Q has no generator sqrt(m)")
        return E0Element(0, 1, self.m)

    def __str__(self) -> str:
        return "Q" if self.m is None else f"Q(sqrt({self.m}))"


class CMElement:
    """``x + y*sqrt(-e)`` with x, y in E0."""

    __slots__ = ("x", "y", "e")

    def __init__(self, x, y, e: E0Element):
        self.x = x if isinstance(x, E0Element) else E0Element(x, 0, e.m)
        self.y = y if isinstance(y, E0Element) else E0Element(y, 0, e.m)
        self.e = e

    def _coerce(self, other):
        if isinstance(other, CMElement):
            if other.e != self.e:
                raise InvalidInput("elements of different CM fields")
            return other
        if isinstance(other, (E0Element, int, Fraction)):
            return CMElement(other, 0, self.e)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CMElement(self.x + o.x, self.y + o.y, self.e)

    __radd__ = __add__

    def __neg__(self):
        return CMElement(-self.x, -self.y, self.e)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CMElement(self.x - o.x, self.y - o.y, self.e)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        x1, y1, x2, y2 = self.x, self.y, o.x, o.y
        return CMElement(x1 * x2 - self.e * y1 * y2, x1 * y2 + y1 * x2, self.e)

    __rmul__ = __mul__

    def conjugate(self) -> "CMElement":
        return CMElement(self.x, -self.y, self.e)

    def norm(self) -> E0Element:
        return norm_E_over_E0(self)

    def inverse(self) -> "CMElement":
        nm = self.norm()
        if not nm:
            raise ZeroDivisionError("inverse of zero")
        return CMElement(self.x / nm, -self.y / nm, self.e)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __bool__(self) -> bool:
        return bool(self.x) or bool(self.y)

    def __eq__(self, other) -> bool:
        if isinstance(other, CMElement):
            return self.x == other.x and self.y == other.y
        if isinstance(other, (E0Element, int, Fraction)):
            return not self.y and self.x == other
        return NotImplemented

    def __hash__(self):
        return hash(self.x) if not self.y else hash((self.x, self.y))

    def __repr__(self) -> str:
        return f"CM({self.x!s}, {self.y!s})"


@dataclass(frozen=True)
class CMField:
    """E = E0(sqrt(-e)) for a totally positive e in E0."""
    base: TotallyRealField
    e: E0Element

    def __post_init__(self):
        if self.e.m != self.base._m and self.e.b:
            raise InvalidInput("e does not lie in the base field")
        if self.e.m != self.base._m:
            object.__setattr__(self, "e", self.base.element(self.e.a, self.e.b))
        for emb in self.base.embeddings():
            if sign_at_embedding(self.e, emb) != 1:
                raise InvalidInput(f"e = {self.e} is not totally positive")

    @classmethod
    def over(cls, base: TotallyRealField, e) -> "CMField":
        if not isinstance(e, E0Element):
            e = base.element(e)
        return cls(base, e)

    @property
    def d(self) -> int:
        return self.base.degree

    def element(self, x=0, y=0) -> CMElement:
        if not isinstance(x, E0Element):
            x = self.base.element(x)
        if not isinstance(y, E0Element):
            y = self.base.element(y)
        return CMElement(x, y, self.e)

    def sqrt_neg_e(self) -> CMElement:
        return self.element(0, 1)

    def one(self) -> CMElement:
        return self.element(1, 0)

    def __str__(self) -> str:
        return f"{self.base}(sqrt(-({self.e})))"


# --- operations ----------------------------------------------------------------

def sign_at_embedding(x: E0Element, emb: Embedding) -> int:
    """Exact sign of a + s*b*sqrt(m) where s is the embedding's sign of sqrt(m)."""
    if not isinstance(x, E0Element):
        return _sign(x)
    sa = _sign(x.a)
    sb = _sign(x.b) * emb.sqrtm_sign
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: the term with the larger square wins (never equal, m square-free)
    return sa if x.a * x.a > x.b * x.b * x.m else sb


def norm_E_over_E0(z: CMElement) -> E0Element:
    return z.x * z.x + z.e * z.y * z.y


def trace_to_subfield(z: CMElement) -> E0Element:
    """z + conj(z)."""
    return z.x + z.x


def is_square_in_E0(x: E0Element) -> Optional[E0Element]:
    """A square root of x in E0, nonnegative under sigma_1, or None."""
    if not isinstance(x, E0Element):
        x = E0Element(x)
    m = x.m
    sigma1 = Embedding(1, 1)
    candidates = []
    if not x.b:
        r = rational_sqrt(x.a)
        if r is not None:
            candidates.append(E0Element(r, 0, m))
        elif m != 1:
            # x = (b' sqrt m)^2 = m b'^2
            r = rational_sqrt(x.a / m)
            if r is not None:
                candidates.append(E0Element(0, r, m))
    else:
        # (a' + b' sqrt m)^2 = x  <=>  a'^2 + m b'^2 = a, 2 a' b' = b
        t = rational_sqrt(x.norm())
        if t is not None:
            for a2 in ((x.a + t) / 2, (x.a - t) / 2):
                ap = rational_sqrt(a2)
                if ap:
                    candidates.append(E0Element(ap, x.b / (2 * ap), m))
    for c in candidates:
        if c * c == x:
            return c if sign_at_embedding(c, sigma1) >= 0 else -c
    return None


@dataclass(frozen=True)
class Eigenspace:
    embedding: Embedding
    eigenvalue: E0Element
    basis: list          # sparse column vectors over E0
    projector: ExactMatrix


def eigenspace_decompose(space_dim: int, action, ext_field: TotallyRealField) -> list[Eigenspace]:
    """Split a Q-space on which E0 acts into the sigma_i-eigenspaces.

    ``action`` is the rational matrix of multiplication by the generator of E0
    (sqrt m, or 1 when E0 = Q).  The eigenspace for sigma_i is
    ``{v : action v = sigma_i(sqrt m) v}`` computed over E0.
    """
    if not isinstance(action, ExactMatrix):
        action = ExactMatrix.from_dense(action)
    if action.shape != (space_dim, space_dim):
        raise InvalidAction(f"action has shape {action.shape}, expected {space_dim}x{space_dim}")
    d = ext_field.degree
    if space_dim % d:
        raise InvalidAction(f"dimension {space_dim} is not divisible by [E0:Q] = {d}")
    one = ext_field.one()
    ident = ExactMatrix.identity(space_dim)
    if ext_field.m is None:
        if action != ident:
            raise InvalidAction("the generator of Q acts by the identity")
        return [Eigenspace(Embedding(1, 1), one,
                           [{i: one} for i in range(space_dim)],
                           ExactMatrix.identity(space_dim, one))]
    m = ext_field.m
    if action @ action != ident.scale(Fraction(m)):
        raise InvalidAction(f"action does not satisfy x^2 = {m}")
    a = action.map(lambda v: E0Element(v, 0, m))
    a.one = one
    id0 = ExactMatrix.identity(space_dim, one)
    root = ext_field.sqrt_m()
    out = []
    for emb in ext_field.embeddings():
        lam = root * emb.sqrtm_sign
        # P = (A + lam) / (2 lam) projects onto the lam-eigenspace along the other one
        proj = (a + id0.scale(lam)).scale(1 / (2 * lam))
        basis = (a - id0.scale(lam)).nullspace()
        out.append(Eigenspace(emb, lam, basis, proj))
    return out
