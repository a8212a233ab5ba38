"""Finite-dimensional *-algebras given by structure constants.

An element is a complex coefficient vector in the basis ``e_0..e_{n-1}``.
Products use the structure tensor ``mult[i, j, k]`` (``e_i e_j = sum_k
mult[i, j, k] e_k``) and the involution matrix ``invol[i, j]`` (``e_i^* =
sum_j invol[i, j] e_j``).  Functionals are coefficient vectors too:
``mu[i] = mu(e_i)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import subspace as sub
from .config import get_tol, rng as make_rng
from .errors import NotCStar, NotPositive, ShapeMismatch


@dataclass(frozen=True)
class StarAlgebra:
    dim: int
    labels: tuple
    mult: np.ndarray
    unit: np.ndarray
    invol: np.ndarray

    def __post_init__(self):
        n = self.dim
        if self.mult.shape != (n, n, n):
            raise ShapeMismatch(f"mult has shape {self.mult.shape}, expected {(n, n, n)}")
        if self.unit.shape != (n,):
            raise ShapeMismatch(f"unit has shape {self.unit.shape}, expected {(n,)}")
        if self.invol.shape != (n, n):
            raise ShapeMismatch(f"invol has shape {self.invol.shape}, expected {(n, n)}")
        if len(self.labels) != n:
            raise ShapeMismatch(f"{len(self.labels)} labels for dimension {n}")

    @classmethod
    def create(cls, mult, unit, invol, labels=None):
        mult = np.asarray(mult, dtype=complex)
        if mult.ndim != 3:
            raise ShapeMismatch("mult must be a rank-3 tensor")
        n = mult.shape[0]
        if labels is None:
            labels = [f"e{i}" for i in range(n)]
        return cls(n, tuple(labels), mult, np.asarray(unit, dtype=complex),
                   np.asarray(invol, dtype=complex))

    # element arithmetic -------------------------------------------------

    def basis(self, i):
        v = np.zeros(self.dim, dtype=complex)
        v[i] = 1.0
        return v

    def one(self):
        return self.unit.copy()

    def product(self, x, y):
        return np.einsum("...i,...j,ijk->...k", np.asarray(x, dtype=complex),
                         np.asarray(y, dtype=complex), self.mult)

    def star(self, x):
        return np.asarray(x, dtype=complex).conj() @ self.invol

    def left_matrix(self, a):
        """Matrix of ``b -> a b`` on coefficient vectors."""
        return np.einsum("i,ijk->kj", np.asarray(a, dtype=complex), self.mult)

    def right_matrix(self, a):
        """Matrix of ``b -> b a`` on coefficient vectors."""
        return np.einsum("j,ijk->ki", np.asarray(a, dtype=complex), self.mult)

    def star_matrix(self):
        """The conjugate-linear involution is ``x -> star_matrix() @ conj(x)``."""
        return self.invol.T

    def is_commutative(self, tol=None):
        return float(np.abs(self.mult - self.mult.transpose(1, 0, 2)).max()) < get_tol(tol)

    def tensor(self, other: "StarAlgebra") -> "StarAlgebra":
        """The algebraic tensor product, basis ordered lexicographically (numpy ``kron``)."""
        n, m = self.dim, other.dim
        mult = np.einsum("ace,bdf->abcdef", self.mult, other.mult).reshape(n * m, n * m, n * m)
        labels = [f"{a}⊗{b}" for a in self.labels for b in other.labels]
        return StarAlgebra(n * m, tuple(labels), mult, np.kron(self.unit, other.unit),
                           np.kron(self.invol, other.invol))


def tensor_product_elements(alg: StarAlgebra, x, y, other: Optional[StarAlgebra] = None):
    """Multiply two elements of ``alg (x) other`` without forming the big structure tensor."""
    other = alg if other is None else other
    n, m = alg.dim, other.dim
    X = np.asarray(x, dtype=complex).reshape(n, m)
    Y = np.asarray(y, dtype=complex).reshape(n, m)
    Z = np.einsum("ab,cd,ace,bdf->ef", X, Y, alg.mult, other.mult, optimize=True)
    return Z.reshape(-1)


def tensor_star(alg: StarAlgebra, x, other: Optional[StarAlgebra] = None):
    other = alg if other is None else other
    return np.asarray(x, dtype=complex).conj() @ np.kron(alg.invol, other.invol)


# ---------------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    """Named residuals with a common threshold.

    ``residuals`` preserves insertion order, which is the order the axioms
    were checked in; ``first_failure`` is what error messages quote.
    """

    tol: float
    residuals: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add(self, name, value):
        self.residuals[name] = float(value)

    @property
    def failed(self):
        return [k for k, v in self.residuals.items() if not v < self.tol]

    @property
    def passed(self):
        return not self.failed

    @property
    def first_failure(self):
        failed = self.failed
        return failed[0] if failed else None

    def merge(self, other: "ValidationReport", prefix=""):
        for k, v in other.residuals.items():
            self.residuals[prefix + k] = v
        self.notes.update(other.notes)

    def table(self):
        width = max((len(k) for k in self.residuals), default=10)
        lines = []
        for k, v in self.residuals.items():
            mark = "ok  " if v < self.tol else "FAIL"
            lines.append(f"{mark} {k:<{width}}  {v:.3e}")
        return "\n".join(lines)

    def to_dict(self):
        return {"tol": self.tol, "passed": self.passed, "failed": self.failed,
                "residuals": dict(self.residuals)}


def _axiom_residuals(alg: StarAlgebra):
    m = alg.mult
    n = alg.dim
    out = {}
    left = np.einsum("ijl,lkp->ijkp", m, m)
    right = np.einsum("jkl,ilp->ijkp", m, m)
    out["associativity"] = np.abs(left - right).max()
    eye = np.eye(n)
    lu = np.einsum("i,ijk->jk", alg.unit, m)
    ru = np.einsum("j,ijk->ik", alg.unit, m)
    out["unit"] = max(np.abs(lu - eye).max(), np.abs(ru - eye).max())
    J = alg.invol
    out["involution involutive"] = np.abs(J.T @ J.conj().T - eye).max()
    stars = J  # row i is e_i^*
    lhs = alg.star(m.reshape(n * n, n)).reshape(n, n, n)  # (e_i e_j)^*
    rhs = np.einsum("ja,ib,abk->ijk", stars, stars, m)  # e_j^* e_i^*
    out["involution antimultiplicative"] = np.abs(lhs - rhs).max()
    return out


def validate_star_algebra(alg: StarAlgebra, tol=None) -> ValidationReport:
    """Residual of every *-algebra axiom plus C*-realizability.

    Conjugate linearity holds by construction of the coefficient
    representation, so it is not a separate entry.  C*-realizability is
    checked by running :func:`block_decompose` and measuring how well the
    block maps reproduce products and adjoints; a failure there records an
    infinite residual.
    """
    tol = get_tol(tol)
    report = ValidationReport(tol)
    for k, v in _axiom_residuals(alg).items():
        report.add(k, v)
    if report.passed:
        try:
            blocks = block_decompose(alg, tol=tol)
            report.add("c_star", blocks.residual(alg))
            report.notes["blocks"] = list(blocks.sizes)
        except NotCStar as exc:
            report.add("c_star", np.inf)
            report.notes["c_star"] = str(exc)
    else:
        report.add("c_star", np.inf)
    return report


# ---------------------------------------------------------------------------
# functionals


def functional_gram(alg: StarAlgebra, mu):
    """``G[i, j] = mu(e_i^* e_j)``; ``mu`` is positive iff G is positive semidefinite."""
    stars = alg.invol
    prods = np.einsum("ia,jb,abk->ijk", stars, np.eye(alg.dim), alg.mult)
    return prods @ np.asarray(mu, dtype=complex)


def apply(mu, a):
    return complex(np.dot(np.asarray(mu, dtype=complex), np.asarray(a, dtype=complex)))


def is_hermitian_functional(alg, mu, tol=None):
    tol = get_tol(tol)
    mu = np.asarray(mu, dtype=complex)
    # mu(e_i^*) = conj(mu(e_i))
    return float(np.abs(alg.invol @ mu - mu.conj()).max()) < tol


def positivity_margin(alg, mu):
    """Smallest eigenvalue of the Hermitian part of the Gram matrix of ``mu``."""
    g = functional_gram(alg, mu)
    g = (g + g.conj().T) / 2
    return float(np.linalg.eigvalsh(g).min())


def is_positive(alg, mu, tol=None):
    tol = get_tol(tol)
    g = functional_gram(alg, mu)
    if np.abs(g - g.conj().T).max() > tol * max(1.0, np.abs(g).max()):
        return False
    w = np.linalg.eigvalsh((g + g.conj().T) / 2)
    return bool(w.min() >= -tol * max(1.0, np.abs(w).max()))


def is_state(alg, mu, tol=None):
    tol = get_tol(tol)
    return is_positive(alg, mu, tol) and abs(apply(mu, alg.unit) - 1) < tol


def functional_flags(alg, mu, tol=None):
    return {"hermitian": is_hermitian_functional(alg, mu, tol),
            "positive": is_positive(alg, mu, tol),
            "state": is_state(alg, mu, tol)}


def trace_functional(alg: StarAlgebra):
    """``a -> Tr(L_a) / dim``: a faithful tracial state on any C*-algebra."""
    return np.einsum("ijj->i", alg.mult) / alg.dim


# ---------------------------------------------------------------------------
# GNS


@dataclass(frozen=True)
class GnsData:
    state: np.ndarray
    gram: np.ndarray
    hilbert_dim: int
    lambda_map: np.ndarray  # hilbert_dim x dim, Lambda(a) = lambda_map @ a
    rep_basis: np.ndarray  # (dim, hilbert_dim, hilbert_dim), images of basis elements
    unit: np.ndarray = None  # the algebra unit, for the cyclic vector

    def rep(self, a):
        return np.einsum("i,ijk->jk", np.asarray(a, dtype=complex), self.rep_basis)

    @property
    def faithful(self):
        return self.hilbert_dim == self.lambda_map.shape[1]

    @property
    def cyclic_vector(self):
        return self.lambda_map @ self.unit

    def pull_back(self, op, tol=None):
        """Coefficients of the algebra element whose representative is ``op``."""
        r = self.hilbert_dim
        mat = self.rep_basis.reshape(len(self.rep_basis), r * r).T
        coef, res = sub.coordinates(mat, np.asarray(op).reshape(-1))
        return coef, res


def gns_construct(alg: StarAlgebra, phi, tol=None) -> GnsData:
    """GNS representation of a positive functional.

    The Gram form ``<Lambda a, Lambda b> = phi(b^* a)`` is factored as
    ``V^H V`` with ``V`` of full row rank, so ``Lambda = V`` and the
    representation is ``V L_a V^+``.
    """
    tol = get_tol(tol)
    phi = np.asarray(phi, dtype=complex)
    g = functional_gram(alg, phi)
    if np.abs(g - g.conj().T).max() > tol * max(1.0, np.abs(g).max()):
        raise NotPositive("functional is not hermitian")
    g = (g + g.conj().T) / 2
    w, u = np.linalg.eigh(g)
    scale = max(np.abs(w).max(initial=0.0), 1e-300)
    if w.min() < -tol * max(1.0, scale):
        raise NotPositive(f"phi(a^*a) = {w.min():.3e} < 0 for some a")
    keep = w > tol * scale
    if not keep.any():
        raise NotPositive("zero functional has trivial GNS space")
    # descending order keeps the basis deterministic
    idx = np.where(keep)[0][::-1]
    V = (np.sqrt(w[idx])[:, None]) * u[:, idx].conj().T
    Vplus = u[:, idx] / np.sqrt(w[idx])[None, :]
    reps = np.stack([V @ alg.left_matrix(alg.basis(i)) @ Vplus for i in range(alg.dim)])
    return GnsData(phi, g, len(idx), V, reps, alg.unit.copy())


def gns_residuals(alg: StarAlgebra, gns: GnsData):
    """Homomorphism, adjoint, unit and inner-product residuals of a GNS representation."""
    reps = gns.rep_basis
    out = {}
    lhs = np.einsum("ijk,kab->ijab", alg.mult, reps)
    rhs = np.einsum("iab,jbc->ijac", reps, reps)
    out["multiplicative"] = np.abs(lhs - rhs).max()
    stars = np.einsum("ij,jab->iab", alg.invol, reps)
    out["adjoint"] = np.abs(stars - reps.conj().transpose(0, 2, 1)).max()
    out["unit"] = np.abs(gns.rep(alg.unit) - np.eye(gns.hilbert_dim)).max()
    # <rep(a) Lambda(b), Lambda(c)> = phi(c^* a b)
    L = gns.lambda_map
    lhs = np.einsum("ck,aks,sb->abc", L.conj().T, reps, L)
    g3 = np.einsum("ij,jkl,lmp,p->ikm", alg.invol, alg.mult, alg.mult, gns.state)
    # g3[c, a, b] = phi(e_c^* e_a e_b)
    out["inner product"] = np.abs(lhs - g3.transpose(1, 2, 0)).max()
    return out


# ---------------------------------------------------------------------------
# block decomposition


@dataclass(frozen=True)
class BlockDecomposition:
    """Unital *-isomorphism ``A -> M_{d_1} (+) ... (+) M_{d_k}``.

    ``maps[p]`` has shape ``(dim, d_p, d_p)`` and holds the images of the
    basis elements in block ``p``; ``central_projections[p]`` is the algebra
    element acting as the identity on block ``p`` and zero elsewhere.
    """

    sizes: tuple
    maps: tuple
    central_projections: np.ndarray
    iso: np.ndarray  # (sum d^2, dim): stacked vec(block images)
    iso_inv: np.ndarray

    def block(self, p, a):
        return np.einsum("i,ijk->jk", np.asarray(a, dtype=complex), self.maps[p])

    def blocks(self, a):
        return [self.block(p, a) for p in range(len(self.sizes))]

    def element(self, mats: Sequence[np.ndarray]):
        """The algebra element with the given block images."""
        v = np.concatenate([np.asarray(m, dtype=complex).reshape(-1) for m in mats])
        return self.iso_inv @ v

    def matrix_unit(self, p, i, j):
        mats = [np.zeros((d, d), dtype=complex) for d in self.sizes]
        mats[p][i, j] = 1.0
        return self.element(mats)

    def residual(self, alg: StarAlgebra):
        """How well the block maps reproduce products, adjoints and the unit."""
        r = 0.0
        for M in self.maps:
            lhs = np.einsum("ijk,kab->ijab", alg.mult, M)
            rhs = np.einsum("iab,jbc->ijac", M, M)
            r = max(r, np.abs(lhs - rhs).max())
            stars = np.einsum("ij,jab->iab", alg.invol, M)
            r = max(r, np.abs(stars - M.conj().transpose(0, 2, 1)).max())
            r = max(r, np.abs(np.einsum("i,ijk->jk", alg.unit, M) - np.eye(M.shape[1])).max())
        r = max(r, np.abs(self.iso @ self.iso_inv - np.eye(len(self.iso))).max())
        return float(r)


def _cluster(values, gap):
    """Group sorted real values whose consecutive differences are below ``gap``."""
    order = np.argsort(values)
    groups = [[order[0]]]
    for a, b in zip(order[:-1], order[1:]):
        if values[b] - values[a] > gap:
            groups.append([b])
        else:
            groups[-1].append(b)
    return groups


def center(alg: StarAlgebra, tol=None):
    """Orthonormal basis of the center ``{z : z e_i = e_i z for all i}``."""
    n = alg.dim
    m = alg.mult
    # row block i: sum_j z_j (m[j, i, :] - m[i, j, :]) = 0
    blocks = [(m[:, i, :] - m[i, :, :]).T for i in range(n)]
    return sub.null_space(np.vstack(blocks), tol)


def block_decompose(alg: StarAlgebra, tol=None, seed=None, attempts=20) -> BlockDecomposition:
    """Artin-Wedderburn decomposition of a finite-dimensional C*-algebra.

    Works in the GNS representation of the normalized trace of the left
    regular representation (faithful and positive exactly when the
    involution makes the algebra a C*-algebra).  A random self-adjoint
    central element splits off the blocks; inside each block, the cyclic
    subspace of an eigenvector of a random self-adjoint element gives an
    irreducible representation.
    """
    tol = get_tol(tol)
    gen = make_rng(seed)
    n = alg.dim
    tau = trace_functional(alg)
    try:
        gns = gns_construct(alg, tau, tol)
    except NotPositive as exc:
        raise NotCStar(f"trace form is not positive: {exc}") from exc
    if not gns.faithful:
        raise NotCStar("trace form is degenerate (algebra not semisimple)")
    reps = gns.rep_basis
    Z = center(alg, tol)
    c = Z.shape[1]
    rep_mat = reps.reshape(n, n * n).T

    def to_element(op):
        coef, res = sub.coordinates(rep_mat, op.reshape(-1))
        if res > 1e3 * tol * max(1.0, np.abs(op).max()):
            raise NotCStar(f"spectral projection not in the algebra (residual {res:.2e})")
        return coef

    for _ in range(attempts):
        z = Z @ (gen.standard_normal(c) + 1j * gen.standard_normal(c))
        z = z + alg.star(z)
        Rz = gns.rep(z)
        w, u = np.linalg.eigh((Rz + Rz.conj().T) / 2)
        spread = max(np.ptp(w), 1.0)
        groups = _cluster(w, 1e-6 * spread)
        if len(groups) == c:
            break
    else:
        raise NotCStar("could not separate the central projections")

    sizes, maps, projs = [], [], []
    for g in groups:
        Pk_op = u[:, g] @ u[:, g].conj().T
        pk = to_element(Pk_op)
        bdim = sub.rank(alg.left_matrix(pk), tol)
        d = int(round(np.sqrt(bdim)))
        if d * d != bdim:
            raise NotCStar(f"central summand of dimension {bdim} is not a full matrix block")
        Q = u[:, g]
        for _ in range(attempts):
            r = gen.standard_normal(n) + 1j * gen.standard_normal(n)
            h = alg.product(alg.product(pk, r + alg.star(r)), pk)
            Hr = Q.conj().T @ gns.rep(h) @ Q
            hw, hu = np.linalg.eigh((Hr + Hr.conj().T) / 2)
            hgroups = _cluster(hw, 1e-6 * max(np.ptp(hw), 1.0))
            if len(hgroups) == d:
                break
        else:
            raise NotCStar("could not find a minimal projection in a block")
        xi = Q @ hu[:, hgroups[0][0]]
        cyc = sub.orth(np.stack([reps[i] @ xi for i in range(n)], axis=1), tol)
        if cyc.shape[1] != d:
            raise NotCStar(f"cyclic subspace has dimension {cyc.shape[1]}, expected {d}")
        maps.append(np.einsum("ka,ikl,lb->iab", cyc.conj(), reps, cyc))
        sizes.append(d)
        projs.append(pk)

    order = sorted(range(len(sizes)), key=lambda p: (sizes[p], _block_key(maps[p], alg)))
    sizes = [sizes[p] for p in order]
    maps = [maps[p] for p in order]
    projs = np.array([projs[p] for p in order])
    if sum(d * d for d in sizes) != n:
        raise NotCStar(f"block sizes {sizes} do not account for dimension {n}")
    iso = np.vstack([M.reshape(n, -1).T for M in maps])
    iso_inv = np.linalg.inv(iso)
    return BlockDecomposition(tuple(sizes), tuple(maps), projs, iso, iso_inv)


def _block_key(M, alg):
    # deterministic tie-break among equal-size blocks: the traces of the basis images
    tr = np.einsum("ijj->i", M)
    return tuple(np.round(np.concatenate([tr.real, tr.imag]), 6))


# ---------------------------------------------------------------------------
# subalgebras and ideals


@dataclass(frozen=True)
class Subalgebra:
    parent: StarAlgebra
    basis: np.ndarray  # dim x k, orthonormal columns

    @property
    def dim(self):
        return self.basis.shape[1]

    def contains(self, v, tol=None):
        return sub.subspace_membership(self.basis, v, tol, orthonormal=True)

    def equals(self, other: "Subalgebra", tol=None):
        return sub.subspace_equal(self.basis, other.basis, tol)

    def closure_residual(self):
        """Distance of products and adjoints of basis elements from the subspace."""
        B = self.basis.T
        if len(B) == 0:
            return 0.0
        prods = self.parent.product(B[:, None, :], B[None, :, :]).reshape(-1, self.parent.dim)
        stars = self.parent.star(B)
        return max(sub.max_distance(self.basis, prods.T), sub.max_distance(self.basis, stars.T))


def span(alg: StarAlgebra, elements, tol=None) -> Subalgebra:
    """Wrap the span of ``elements`` (no closure is taken)."""
    vecs = np.asarray(elements, dtype=complex).reshape(-1, alg.dim).T
    return Subalgebra(alg, sub.orth(vecs, tol, dim=alg.dim))


def _as_vectors(alg, seed):
    if isinstance(seed, Subalgebra):
        return seed.basis
    arr = np.asarray(seed, dtype=complex)
    if arr.size == 0:
        return np.zeros((alg.dim, 0), dtype=complex)
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    # a list of elements is given row-wise
    return arr.reshape(-1, alg.dim).T


def subalgebra_closure(alg: StarAlgebra, seed, tol=None, max_iter=100) -> Subalgebra:
    """Smallest *-closed, product-closed subspace containing ``seed``.

    The unit is not added; pass it in the seed if the unital closure is wanted.
    """
    basis = sub.orth(_as_vectors(alg, seed), tol, dim=alg.dim)
    for _ in range(max_iter):
        B = basis.T
        if len(B) == 0:
            break
        prods = alg.product(B[:, None, :], B[None, :, :]).reshape(-1, alg.dim)
        new = sub.orth(np.column_stack([basis, alg.star(B).T, prods.T]), tol)
        if new.shape[1] == basis.shape[1]:
            basis = new
            break
        basis = new
    return Subalgebra(alg, basis)


def ideal_closure(alg: StarAlgebra, seed, tol=None, max_iter=100) -> Subalgebra:
    """Smallest two-sided ideal containing ``seed``.

    Fixed point of alternately multiplying by basis elements on the left and
    on the right and taking spans.
    """
    basis = sub.orth(_as_vectors(alg, seed), tol, dim=alg.dim)
    E = np.eye(alg.dim)
    for _ in range(max_iter):
        B = basis.T
        if len(B) == 0:
            break
        left = alg.product(E[:, None, :], B[None, :, :]).reshape(-1, alg.dim)
        right = alg.product(B[:, None, :], E[None, :, :]).reshape(-1, alg.dim)
        new = sub.orth(np.column_stack([basis, left.T, right.T]), tol)
        if new.shape[1] == basis.shape[1]:
            basis = new
            break
        basis = new
    return Subalgebra(alg, basis)


def subspace_membership(space, v, tol=None):
    """``(member, residual)`` for ``v`` against the span of the columns of ``space``."""
    if isinstance(space, Subalgebra):
        space = space.basis
    return sub.subspace_membership(space, v, tol)


# ---------------------------------------------------------------------------
# states from block data


def random_state(alg: StarAlgebra, gen, blocks: Optional[BlockDecomposition] = None,
                 support: Optional[Sequence[int]] = None, subspaces=None):
    """A random state ``a -> sum_p Tr(rho_p block_p(a))``.

    ``support`` restricts which blocks get weight; ``subspaces[p]`` (columns)
    restricts the range of ``rho_p``.
    """
    if blocks is None:
        blocks = block_decompose(alg)
    k = len(blocks.sizes)
    support = list(range(k)) if support is None else list(support)
    rhos = []
    for p, d in enumerate(blocks.sizes):
        if p not in support:
            rhos.append(np.zeros((d, d), dtype=complex))
            continue
        basis = np.eye(d) if subspaces is None else subspaces[p]
        r = basis.shape[1]
        if r == 0:
            rhos.append(np.zeros((d, d), dtype=complex))
            continue
        g = gen.standard_normal((r, r)) + 1j * gen.standard_normal((r, r))
        rho = basis @ (g @ g.conj().T) @ basis.conj().T
        rhos.append(rho * gen.uniform(0.1, 1.0))
    total = sum(np.trace(r).real for r in rhos)
    if total <= 0:
        raise ValueError("no admissible block for a random state")
    return state_from_densities(blocks, [r / total for r in rhos])


def state_from_densities(blocks: BlockDecomposition, rhos):
    """Coefficients ``mu(e_i) = sum_p Tr(rho_p block_p(e_i))``."""
    mu = 0
    for rho, M in zip(rhos, blocks.maps):
        mu = mu + np.einsum("ab,iba->i", rho, M)
    return np.asarray(mu, dtype=complex)
