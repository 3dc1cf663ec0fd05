"""Built-in example objects and seeded random generators."""

from __future__ import annotations

import random
import re

from .fields import K, K0, CoefficientTower
from .hodge import PadicHodgeComplex, phc_direct_sum, theta_embed
from .homcomplex import LayerComplex
from .filtration import Filtration
from .linalg import Matrix, to_q
from .mfcomplex import MFComplex, random_basis_change
from .modules import (
    FilteredPhiNModule,
    change_basis,
    direct_sum,
    random_invertible,
    scalar_module,
    tate_twist,
    unit,
)
from .restriction import extend_matrix

DEFAULT_P = 5


def default_tower(p: int = DEFAULT_P) -> CoefficientTower:
    return CoefficientTower(p, name=f"Q_{p}")


def unit_twist(tower: CoefficientTower, n: int = 0) -> FilteredPhiNModule:
    m = tate_twist(unit(tower), n)
    m.name = f"unit({n})" if n else "unit"
    return m


def tate_curve(tower: CoefficientTower, c=3) -> FilteredPhiNModule:
    """phi = diag(1, p), N e2 = e1, F^1 = span(e2 + c e1)."""
    return FilteredPhiNModule.from_data(tower, [[1, 0], [0, tower.p]], [[0, 0], [1, 0]],
                                        [(0, [[1, 0], [0, 1]]), (1, [[c, 1]])], "tate-curve")


def elliptic_good(tower: CoefficientTower, a_p: int = 2, line=(1, 0)) -> FilteredPhiNModule:
    """Companion matrix of x^2 - a_p x + p with a chosen F^1 line."""
    p = tower.p
    return FilteredPhiNModule.from_data(tower, [[0, 1], [-p, a_p]], None,
                                        [(0, [[1, 0], [0, 1]]), (1, [list(line)])], "elliptic-good")


def non_admissible(tower: CoefficientTower) -> FilteredPhiNModule:
    """phi = diag(1, p), N = 0 with F^1 on the unit-root line."""
    return FilteredPhiNModule.from_data(tower, [[1, 0], [0, tower.p]], None, [(1, [[1, 0]])], "non-admissible")


# random generators (all seeded through an explicit Random instance)


def _unit_factor(tower: CoefficientTower, rng) -> int:
    while True:
        u = rng.choice([1, 2, 3, -1, -2])
        if u % tower.p:
            return u


def random_block(tower: CoefficientTower, rng, max_dim: int = 2, monodromy: bool = True) -> FilteredPhiNModule:
    """A small admissible building block."""
    kinds = ["scalar", "scalar", "tate", "elliptic"] if max_dim >= 2 else ["scalar"]
    if not monodromy:
        kinds = [k for k in kinds if k != "tate"]
    kind = rng.choice(kinds)
    n = rng.randint(-1, 1)
    if kind == "scalar":
        return scalar_module(tower, _unit_factor(tower, rng), n)
    if kind == "tate":
        return tate_twist(tate_curve(tower, rng.randint(-2, 2)), n)
    line = rng.choice([(1, 0), (0, 1), (1, 1)])
    return tate_twist(elliptic_good(tower, rng.choice([1, 2, -2]), line), n)


def random_module(tower: CoefficientTower, rng, max_dim: int = 3, monodromy: bool = True) -> FilteredPhiNModule:
    """Direct sum of admissible blocks in a random basis (admissible by construction)."""
    blocks, dim = [], 0
    while dim < max_dim:
        b = random_block(tower, rng, max_dim - dim, monodromy)
        blocks.append(b)
        dim += b.dim
        if rng.random() < 0.5:
            break
    m = direct_sum(*blocks) if len(blocks) > 1 else blocks[0]
    m = change_basis(m, random_invertible(tower, m.dim, rng))
    m.name = "random-module"
    return m


def two_term_complex(x: FilteredPhiNModule, y: FilteredPhiNModule, z: FilteredPhiNModule, lo: int = 0) -> MFComplex:
    """``X (+) Y -> Y (+) Z`` with the identity on Y."""
    l0, l1 = direct_sum(x, y), direct_sum(y, z)
    d = Matrix.block([[None, Matrix.identity(y.qdim)], [None, None]], [y.qdim, z.qdim], [x.qdim, y.qdim])
    return MFComplex(x.tower, lo, [l0, l1], [d], "two-term")


def random_two_term(tower: CoefficientTower, rng, max_dim: int = 1) -> MFComplex:
    x = random_module(tower, rng, max_dim)
    y = random_module(tower, rng, max_dim)
    z = random_module(tower, rng, max_dim)
    return random_basis_change(two_term_complex(x, y, z), rng)


def random_complex(tower: CoefficientTower, rng) -> MFComplex:
    if rng.random() < 0.5:
        return MFComplex.single(random_module(tower, rng, 2))
    return random_two_term(tower, rng)


def acyclic_phc(tower: CoefficientTower, rng, lo: int = 0) -> PadicHodgeComplex:
    """Acyclic pHC with non-identity comparison maps into a larger K-complex."""
    one = Matrix.identity(tower.f)
    sig = tower.sigma_matrix
    rig = LayerComplex(tower, K0, lo, (1, 1), (one,), (sig, sig), (Matrix.zeros(tower.f, tower.f),) * 2)
    kq = tower.deg(K)
    ks = LayerComplex(tower, K, lo, (2, 2), (Matrix.identity(2 * kq),))
    fil = Filtration.trivial(tower, 1, rng.randint(-1, 1))
    dr = LayerComplex(tower, K, lo, (1, 1), (Matrix.identity(kq),), filts=(fil, fil))
    a = rng.choice([1, 2, -1])
    b = rng.choice([1, 3, -2])
    alpha_blk = Matrix.vstack([Matrix.identity(kq).scale(a), Matrix.zeros(kq, kq)])
    beta_blk = Matrix.vstack([Matrix.identity(kq).scale(b), Matrix.identity(kq)])
    alpha = {lo: alpha_blk, lo + 1: alpha_blk}
    beta = {lo: beta_blk, lo + 1: beta_blk}
    return PadicHodgeComplex(tower, rig, ks, dr, alpha, beta, "acyclic")


def perturbed_theta(l: MFComplex | FilteredPhiNModule, rng, with_acyclic: bool = True) -> PadicHodgeComplex:
    """Theta(l) with the K-specialization moved by a random K-linear automorphism, plus an acyclic summand."""
    th = theta_embed(l)
    t = th.tower
    gs = {n: extend_matrix(t, random_invertible(t, th.rig.dim(n), rng)) for n in th.degrees()}
    ks = th.k_spec
    diffs = tuple(gs[n + 1] @ ks.d(n) @ gs[n].inverse() for n in range(ks.lo, ks.hi))
    ks2 = LayerComplex(t, K, ks.lo, ks.dims, diffs)
    out = PadicHodgeComplex(t, th.rig, ks2, th.dr, dict(gs), dict(gs), "perturbed")
    if with_acyclic:
        out = phc_direct_sum(out, acyclic_phc(t, rng, rng.choice([th.degrees().start, th.degrees().start - 1])))
        out.name = "perturbed"
    return out


# named examples


_TWIST = re.compile(r"^unit\((-?\d+)\)$")

EXAMPLE_NAMES = ["unit", "unit(n)", "tate-curve", "elliptic-good", "non-admissible", "random-module",
                 "random-complex"]


def named_module(name: str, tower: CoefficientTower | None = None, seed: int = 0):
    """Resolve an example name to a module or complex."""
    t = tower or default_tower()
    if name == "unit":
        return unit_twist(t, 0)
    mt = _TWIST.match(name)
    if mt:
        return unit_twist(t, int(mt.group(1)))
    if name == "tate-curve":
        return tate_curve(t)
    if name == "elliptic-good":
        return elliptic_good(t)
    if name == "non-admissible":
        return non_admissible(t)
    if name == "random-module":
        return random_module(t, random.Random(seed))
    if name == "random-complex":
        return random_two_term(t, random.Random(seed))
    raise KeyError(f"unknown example {name!r}")


def quadratic_tower(p: int = 5, e: int = 1) -> CoefficientTower:
    """f = 2 tower (unramified quadratic K0), optionally with y^2 - p."""
    if e == 1:
        return CoefficientTower(p, f=2)
    return CoefficientTower(p, f=2, e=2, eisenstein=((-p, 0), (0, 0), (1, 0)))


def ramified_tower(p: int = 5) -> CoefficientTower:
    return CoefficientTower(p, e=2, eisenstein=((-p,), (0,), (1,)))


__all__ = [
    "default_tower", "unit_twist", "tate_curve", "elliptic_good", "non_admissible", "random_module",
    "random_two_term", "random_complex", "two_term_complex", "acyclic_phc", "perturbed_theta", "named_module",
    "EXAMPLE_NAMES", "quadratic_tower", "ramified_tower", "to_q",
]
