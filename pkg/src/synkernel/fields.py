"""Exact models of the coefficient fields K0 and K.

K0 is Q (f=1) or an unramified quadratic extension Q[x]/(x^2 - c) (f=2),
with Frobenius acting through ``sigma_matrix``.  K = K0[y]/(E(y)) for an
Eisenstein polynomial E, so y plays the role of the uniformizer pi.

Elements are coordinate vectors over Q: ``{x^a}`` for K0 and ``{x^a y^b}``
(index ``a + f*b``) for K.  Vector spaces over either field are handled by
restriction of scalars: coordinate ``i*deg + a`` holds the ``a``-th rational
coordinate of the ``i``-th field coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from gmpy2 import mpq

from .linalg import ONE, ZERO, Matrix, det, to_q

Q_LAYER = "Q"
K0 = "K0"
K = "K"
LAYERS = (Q_LAYER, K0, K)


class FieldError(ValueError):
    pass


def vp_rational(value, p: int) -> float | int:
    value = mpq(value)
    if value == 0:
        return math.inf
    v = 0
    num, den = int(value.numerator), int(value.denominator)
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % q for q in range(2, int(n ** 0.5) + 1))


def _default_nonresidue(p: int) -> int:
    if p == 2:
        return 5
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return c
    raise FieldError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True, eq=False)
class CoefficientTower:
    """The pair of fields K0 (degree f over Q) and K (degree e over K0).

    ``k0_modulus`` lists the coefficients of the monic modulus from the
    constant term up (``[-c, 0, 1]`` for x^2 - c).  ``eisenstein`` lists the
    e+1 coefficients of E(y), each a K0 coordinate vector, constant term first.
    """

    p: int
    f: int = 1
    e: int = 1
    k0_modulus: tuple | None = None
    sigma_matrix: Matrix | None = None
    eisenstein: tuple | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise FieldError(f"p={self.p} is not prime")
        if self.f not in (1, 2):
            raise FieldError("only residue degree f in {1, 2} is supported")
        if self.e < 1:
            raise FieldError("ramification degree must be positive")
        if self.f == 1:
            object.__setattr__(self, "k0_modulus", None)
            object.__setattr__(self, "sigma_matrix", Matrix.identity(1))
        else:
            if self.k0_modulus is None:
                c = _default_nonresidue(self.p)
                object.__setattr__(self, "k0_modulus", (mpq(-c), ZERO, ONE))
                object.__setattr__(self, "sigma_matrix", Matrix([[1, 0], [0, -1]]))
            else:
                mod = tuple(to_q(c) for c in self.k0_modulus)
                if len(mod) != self.f + 1 or mod[-1] != 1:
                    raise FieldError("k0_modulus must be monic of degree f")
                object.__setattr__(self, "k0_modulus", mod)
                if self.sigma_matrix is None:
                    raise FieldError("sigma_matrix is required with a custom k0_modulus")
        if self.eisenstein is None:
            # y^e - p
            coeffs = [self._k0_const(0)] * self.e + [self._k0_const(1)]
            coeffs[0] = self._k0_const(-self.p)
            object.__setattr__(self, "eisenstein", tuple(coeffs))
        else:
            coeffs = tuple(tuple(to_q(v) for v in c) for c in self.eisenstein)
            object.__setattr__(self, "eisenstein", coeffs)
        self._check()

    def _k0_const(self, c) -> tuple:
        return (to_q(c),) + (ZERO,) * (self.f - 1)

    def _check(self) -> None:
        s = self.sigma_matrix
        if s.shape != (self.f, self.f):
            raise FieldError("sigma_matrix must be f x f")
        if s.power(self.f) != Matrix.identity(self.f):
            raise FieldError("sigma does not have order dividing f")
        if s.column(0) != list(self._k0_const(1)):
            raise FieldError("sigma must fix 1")
        if self.f == 2:
            # sigma(x)^2 == sigma(x^2) pins multiplicativity on the basis
            sx = tuple(s.column(1))
            x = (ZERO, ONE)
            if self.mul(K0, sx, sx) != tuple(s @ list(self.mul(K0, x, x))):
                raise FieldError("sigma is not multiplicative")
            if self.mult_matrix(K0, (ZERO, ONE)).det() == 0:
                raise FieldError("k0_modulus is degenerate")
        if len(self.eisenstein) != self.e + 1:
            raise FieldError("eisenstein polynomial must have degree e")
        if any(len(c) != self.f for c in self.eisenstein):
            raise FieldError("eisenstein coefficients must be K0 elements")
        if self.eisenstein[-1] != self._k0_const(1):
            raise FieldError("eisenstein polynomial must be monic")
        if self.valuation(K0, self.eisenstein[0]) != 1:
            raise FieldError("eisenstein constant term must have valuation 1")
        for c in self.eisenstein[1:-1]:
            if self.valuation(K0, c) < 1:
                raise FieldError("eisenstein middle coefficients must have positive valuation")

    # degrees and multiplication

    def deg(self, layer: str) -> int:
        return {Q_LAYER: 1, K0: self.f, K: self.e * self.f}[layer]

    @cached_property
    def _x0(self) -> Matrix:
        """Multiplication by x on K0."""
        f = self.f
        m = Matrix.zeros(f, f)
        if f == 1:
            m.rows[0][0] = ZERO
            return m
        for a in range(f - 1):
            m.rows[a + 1][a] = ONE
        for a in range(f):
            m.rows[a][f - 1] = -self.k0_modulus[a]
        return m

    def _mult0(self, coords: Sequence) -> Matrix:
        out = Matrix.zeros(self.f, self.f)
        xp = Matrix.identity(self.f)
        for a, c in enumerate(coords):
            if c:
                out = out + xp.scale(c)
            xp = self._x0 @ xp
        return out

    @cached_property
    def _xk(self) -> Matrix:
        return Matrix.diag([self._x0] * self.e)

    @cached_property
    def _yk(self) -> Matrix:
        f, e = self.f, self.e
        blocks = [[None] * e for _ in range(e)]
        for b in range(e - 1):
            blocks[b + 1][b] = Matrix.identity(f)
        for b in range(e):
            c = self.eisenstein[b]
            if any(c):
                blocks[b][e - 1] = self._mult0(c).scale(-1)
        return Matrix.block(blocks, [f] * e, [f] * e)

    @cached_property
    def _basis_mults(self) -> dict:
        out = {Q_LAYER: [Matrix.identity(1)]}
        out[K0] = [self._x0.power(a) if a else Matrix.identity(self.f) for a in range(self.f)]
        xs = [Matrix.identity(self.e * self.f)]
        for _ in range(1, self.f):
            xs.append(self._xk @ xs[-1])
        ys = [Matrix.identity(self.e * self.f)]
        for _ in range(1, self.e):
            ys.append(self._yk @ ys[-1])
        out[K] = [xs[a] @ ys[b] for b in range(self.e) for a in range(self.f)]
        return out

    def basis_mults(self, layer: str) -> list[Matrix]:
        """Multiplication matrices of the Q-basis elements of ``layer``."""
        return self._basis_mults[layer]

    def mult_matrix(self, layer: str, coords: Sequence) -> Matrix:
        n = self.deg(layer)
        out = Matrix.zeros(n, n)
        for c, m in zip(coords, self.basis_mults(layer)):
            if c:
                out = out + m.scale(c)
        return out

    def mul(self, layer: str, a: Sequence, b: Sequence) -> tuple:
        return tuple(self.mult_matrix(layer, a) @ list(b))

    def inv(self, layer: str, a: Sequence) -> tuple:
        m = self.mult_matrix(layer, a)
        one = [ONE] + [ZERO] * (self.deg(layer) - 1)
        try:
            return tuple(m.inverse() @ one)
        except ZeroDivisionError:
            raise ZeroDivisionError("inverse of zero field element") from None

    def sigma_coords(self, a: Sequence) -> tuple:
        return tuple(self.sigma_matrix @ list(a))

    def embed(self, a: Sequence, src: str = K0, dst: str = K) -> tuple:
        """Coordinates of a Q or K0 element viewed in a larger layer."""
        out = [ZERO] * self.deg(dst)
        for i, v in enumerate(a):
            out[i] = v
        return tuple(out)

    def valuation(self, layer: str, a: Sequence):
        """v_p normalized by v_p(p) = 1, via the norm down to Q."""
        if not any(a):
            return math.inf
        n = det(self.mult_matrix(layer, a))
        v = vp_rational(n, self.p)
        r = mpq(v, self.deg(layer))
        return int(r) if r.denominator == 1 else r

    # element constructors

    def element(self, layer: str, value) -> "FieldElement":
        n = self.deg(layer)
        if isinstance(value, FieldElement):
            if value.tower is not self:
                raise FieldError("tower mismatch")
            return value if value.layer == layer else FieldElement(
                self, layer, self.embed(value.coords, value.layer, layer))
        if isinstance(value, (list, tuple)):
            coords = tuple(to_q(v) for v in value)
            if len(coords) != n:
                raise FieldError(f"{layer} element needs {n} coordinates, got {len(coords)}")
            return FieldElement(self, layer, coords)
        return FieldElement(self, layer, (to_q(value),) + (ZERO,) * (n - 1))

    def k0(self, value) -> "FieldElement":
        return self.element(K0, value)

    def k(self, value) -> "FieldElement":
        return self.element(K, value)

    @property
    def x(self) -> "FieldElement":
        if self.f == 1:
            raise FieldError("K0 = Q has no generator x")
        return self.k0((ZERO, ONE))

    @property
    def pi(self) -> "FieldElement":
        if self.e == 1:
            return self.k(self.p)
        coords = [ZERO] * (self.e * self.f)
        coords[self.f] = ONE
        return self.k(coords)

    def describe(self) -> dict:
        from .linalg import q_str
        return {
            "p": self.p,
            "f": self.f,
            "e": self.e,
            "k0_modulus": None if self.k0_modulus is None else [q_str(c) for c in self.k0_modulus],
            "sigma_matrix": self.sigma_matrix.to_strings(),
            "eisenstein": [[q_str(v) for v in c] for c in self.eisenstein],
        }

    def same_as(self, other: "CoefficientTower") -> bool:
        return self is other or self.describe() == other.describe()


@dataclass(frozen=True)
class FieldElement:
    tower: CoefficientTower
    layer: str
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.tower.deg(self.layer):
            raise FieldError("coordinate length does not match layer")

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if not self.tower.same_as(other.tower):
                raise FieldError("tower mismatch")
            if other.layer != self.layer:
                raise FieldError(f"layer mismatch: {self.layer} vs {other.layer}")
            return other
        return self.tower.element(self.layer, other)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.tower, self.layer, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, self.layer, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.tower, self.layer, self.tower.mul(self.layer, self.coords, o.coords))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        return FieldElement(self.tower, self.layer, self.tower.inv(self.layer, self.coords))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.layer == other.layer and self.coords == other.coords
        try:
            return self.coords == self._coerce(other).coords
        except (FieldError, TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.layer, self.coords))

    def __bool__(self):
        return any(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def valuation(self):
        return self.tower.valuation(self.layer, self.coords)

    def sigma(self) -> "FieldElement":
        if self.layer != K0:
            raise FieldError("sigma is defined on K0 only")
        return FieldElement(self.tower, K0, self.tower.sigma_coords(self.coords))

    def to_k(self) -> "FieldElement":
        return self.tower.element(K, self)

    def __repr__(self):
        from .linalg import q_str
        return f"{self.layer}({', '.join(q_str(c) for c in self.coords)})"


def valuation(a: FieldElement):
    return a.valuation()


def sigma(a: FieldElement) -> FieldElement:
    return a.sigma()


def field_arith(a: FieldElement, b: FieldElement | None, kind: str) -> FieldElement:
    if kind == "add":
        return a + b
    if kind == "mul":
        return a * b
    if kind == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {kind!r}")


def qq_tower(p: int) -> CoefficientTower:
    """The default profile K = K0 = Q (a dense model of Q_p)."""
    return CoefficientTower(p)
