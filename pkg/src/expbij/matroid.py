"""Oriented-matroid data of a rational vector configuration.

Circuits and cocircuits are computed directly from exact kernels of column
subsets; the full vector/covector sets are their composition closures. The
chirotope gives an independent route to the cocircuits, used as a
cross-check. Face lattices of the cone spanned by the columns, conformal
decomposition, interior membership, and the two-branch alternative for sign
vectors against a subspace all live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .linalg import (
    InputError,
    RationalMatrix,
    SubspaceBasis,
    Vec,
    dot,
    is_zero_vec,
    kernel_basis,
    rank,
    row_space_basis,
    vec_scale,
    vec_sub,
)
from .lp import Rel, feasible, make_system, realize_kernel_sign, realize_sign_vector
from .signs import (
    EnumerationCap,
    SignVector,
    composition_closure,
    minimal_support_members,
    nonneg_part,
    sign_of,
)


def _row_basis(M: RationalMatrix) -> RationalMatrix:
    """Full-rank matrix with the same row space (and hence the same kernel)."""
    basis = row_space_basis(M)
    if basis.dim == 0:
        raise InputError("zero matrix has no vector configuration")
    if basis.dim == M.rows:
        return M
    return RationalMatrix(basis.vectors)


def _perm_sign(tup) -> int:
    inv = 0
    for i in range(len(tup)):
        for j in range(i + 1, len(tup)):
            if tup[i] > tup[j]:
                inv += 1
            elif tup[i] == tup[j]:
                return 0
    return -1 if inv % 2 else 1


class Chirotope:
    """Sign of det(W_I) on sorted d-tuples, extended alternately to all tuples."""

    def __init__(self, d: int, n: int, signs: dict[tuple[int, ...], int]):
        self.d = d
        self.n = n
        self._signs = dict(signs)

    def value(self, tup) -> int:
        tup = tuple(tup)
        if len(tup) != self.d:
            raise InputError(f"chirotope takes {self.d}-tuples, got {len(tup)}")
        s = _perm_sign(tup)
        if s == 0:
            return 0
        return s * self._signs[tuple(sorted(tup))]

    def sorted_items(self):
        return sorted(self._signs.items())

    def __eq__(self, other):
        return (isinstance(other, Chirotope)
                and (self.d, self.n, self._signs) == (other.d, other.n, other._signs))


def chirotope(W: RationalMatrix) -> Chirotope:
    d, n = W.rows, W.cols
    if d > n:
        raise InputError("chirotope needs d <= n")
    if rank(W) < d:
        raise InputError("chirotope needs a full-rank configuration")
    signs = {}
    for I in combinations(range(n), d):
        det = W.column_submatrix(I).det()
        signs[I] = 0 if det == 0 else (1 if det > 0 else -1)
    return Chirotope(d, n, signs)


def cocircuits_from_chirotope(chi: Chirotope) -> set[SignVector]:
    out: set[SignVector] = set()
    for I in combinations(range(chi.n), chi.d - 1):
        sv = SignVector.from_components(chi.value(I + (j,)) for j in range(chi.n))
        if not sv.is_zero():
            out.add(sv)
            out.add(-sv)
    return out


def cocircuits(M: RationalMatrix) -> set[SignVector]:
    """Minimal-support sign vectors of im M^T, from rank-(d-1) column subsets."""
    W = _row_basis(M)
    d, n = W.rows, W.cols
    out: set[SignVector] = set()
    if d == 1:
        sv = sign_of(W.row(0))
        return {sv, -sv}
    cols = [W.column(j) for j in range(n)]
    for I in combinations(range(n), d - 1):
        sub = RationalMatrix([cols[i] for i in I])  # rows w^i, i in I
        ker = kernel_basis(sub)
        if ker.dim != 1:
            continue  # columns in I do not span a hyperplane
        x = ker.vectors[0]
        sv = sign_of(W.transpose_vec(x))
        if not sv.is_zero():
            out.add(sv)
            out.add(-sv)
    return out


def circuits(M: RationalMatrix) -> set[SignVector]:
    """Minimal-support sign vectors of ker M: minimal dependent column sets."""
    W = _row_basis(M)
    d, n = W.rows, W.cols
    out: set[SignVector] = set()
    found_supports: list[set[int]] = []
    for size in range(1, min(d + 1, n) + 1):
        for J in combinations(range(n), size):
            Jset = set(J)
            if any(s <= Jset for s in found_supports):
                continue
            ker = kernel_basis(W.column_submatrix(J))
            if ker.dim == 0:
                continue
            v = ker.vectors[0]
            if ker.dim > 1 or any(x == 0 for x in v):
                continue  # dependency not minimal on J; handled by a subset
            comps = [Fraction(0)] * n
            for pos, j in enumerate(J):
                comps[j] = v[pos]
            sv = sign_of(comps)
            out.add(sv)
            out.add(-sv)
            found_supports.append(Jset)
    return out


def covectors(M: RationalMatrix, cap: int = 12) -> set[SignVector]:
    """All of sign(im M^T): composition closure of the cocircuits."""
    if M.cols > cap:
        raise EnumerationCap(f"covector enumeration capped at n <= {cap}, got n = {M.cols}")
    return composition_closure(cocircuits(M), M.cols)


def vectors(M: RationalMatrix, cap: int = 12) -> set[SignVector]:
    """All of sign(ker M): composition closure of the circuits."""
    if M.cols > cap:
        raise EnumerationCap(f"vector enumeration capped at n <= {cap}, got n = {M.cols}")
    return composition_closure(circuits(M), M.cols)


@dataclass(frozen=True)
class OrientedMatroidData:
    circuits: frozenset[SignVector]
    cocircuits: frozenset[SignVector]
    vectors: frozenset[SignVector]
    covectors: frozenset[SignVector]
    chirotope: Chirotope


def oriented_matroid(W: RationalMatrix, cap: int = 12) -> OrientedMatroidData:
    chi = chirotope(W)
    coc = cocircuits(W)
    if coc != cocircuits_from_chirotope(chi):
        raise AssertionError("cocircuits disagree with the chirotope-derived set")
    return OrientedMatroidData(
        circuits=frozenset(circuits(W)),
        cocircuits=frozenset(coc),
        vectors=frozenset(vectors(W, cap)),
        covectors=frozenset(covectors(W, cap)),
        chirotope=chi,
    )


def conformal_decompose(M: RationalMatrix, tau: SignVector,
                        circuit_set: set[SignVector] | None = None) -> list[SignVector]:
    """Circuits rho_k <= tau composing to tau, at most min(dim ker, |supp tau|) of them."""
    if tau.n != M.cols:
        raise InputError("sign vector length differs from the column count")
    if tau.is_zero():
        return []
    x = realize_kernel_sign(M, tau)
    if x is None:
        raise InputError(f"{tau} is not a sign vector of the kernel")
    if circuit_set is None:
        circuit_set = circuits(M)
    ordered = sorted(circuit_set, key=str)
    out: list[SignVector] = []
    while not is_zero_vec(x):
        sx = sign_of(x)
        rho = next((c for c in ordered if c.leq(sx)), None)
        assert rho is not None, "nonzero kernel vector without a conformal circuit"
        J = rho.support_set()
        ker = kernel_basis(M.column_submatrix(J))
        assert ker.dim == 1
        u = [Fraction(0)] * M.cols
        for pos, j in enumerate(J):
            u[j] = ker.vectors[0][pos]
        u = tuple(u)
        if sign_of(u) != rho:
            u = vec_scale(-1, u)
        assert sign_of(u) == rho
        t = min(x[j] / u[j] for j in J)
        x = vec_sub(x, vec_scale(t, u))
        out.append(rho)
    composed = out[0]
    for rho in out[1:]:
        composed = composed.compose(rho)
    assert composed == tau
    return out


@dataclass(frozen=True)
class FaceLattice:
    """Nonnegative covectors of cone(columns), with the face order reversed:
    face(tau) is contained in face(tau') iff tau' <= tau."""

    n: int
    d: int
    faces: frozenset[SignVector]
    pointed: bool
    lineality_dim: int
    robustly_generated: bool
    full_space: bool
    all_plus: bool
    zero_columns: tuple[int, ...]

    def facet_covectors(self) -> set[SignVector]:
        return minimal_support_members(self.faces)


def face_lattice(W: RationalMatrix, cap: int = 12) -> FaceLattice:
    d, n = W.rows, W.cols
    faces = nonneg_part(covectors(W, cap))
    full_space = faces == {SignVector.zero(n)}
    top = SignVector.zero(n)
    for tau in faces:
        top = top.compose(tau)
    lineality_cols = top.zero_set()
    if full_space:
        lineality_dim = rank(W)
    elif lineality_cols:
        lineality_dim = rank(W.column_submatrix(lineality_cols))
    else:
        lineality_dim = 0
    zero_columns = tuple(j for j in range(n) if is_zero_vec(W.column(j)))
    return FaceLattice(
        n=n,
        d=d,
        faces=frozenset(faces),
        pointed=(lineality_dim == 0),
        lineality_dim=lineality_dim,
        robustly_generated=_robustly_generated(W, faces, full_space, zero_columns),
        full_space=full_space,
        all_plus=(SignVector(n, (1 << n) - 1, 0) in faces),
        zero_columns=zero_columns,
    )


def _robustly_generated(W, faces, full_space, zero_columns) -> bool:
    """Either d = 1, or every extreme ray carries a unique generator and all
    remaining generators are interior."""
    if rank(W) == 1:
        return True
    if full_space:
        return True
    if zero_columns:
        return False
    n = W.cols
    nonzero_faces = [t for t in faces if not t.is_zero()]
    singleton_zero_sets = {t.zero_set()[0] for t in nonzero_faces if len(t.zero_set()) == 1}
    for i in range(n):
        if i in singleton_zero_sets:
            continue  # generator i spans its own extreme-ray face
        if all(t[i] == 1 for t in nonzero_faces):
            continue  # generator i is interior
        return False
    return True


@dataclass(frozen=True)
class MintyWitness:
    """branch "subspace": x in S, strictly signed on supp(sigma) as sigma demands.
    branch "orthogonal": nonzero x in S-perp with sign(x) <= sigma."""

    branch: str
    vector: Vec


def minty_alternative(basis: SubspaceBasis, sigma: SignVector) -> MintyWitness:
    """Exactly one of the two branches holds; returns its rational witness."""
    n = basis.ambient_dim
    if sigma.n != n:
        raise InputError("sign vector length differs from the ambient dimension")
    if sigma.is_zero():
        raise InputError("the alternative needs a nonzero sign vector")
    primal = _signed_point_in_span(basis.vectors, sigma, strict=True)
    if primal is not None:
        return MintyWitness("subspace", primal)
    comp = kernel_basis(RationalMatrix(basis.vectors)) if basis.dim else None
    comp_vectors = comp.vectors if comp is not None else tuple(
        tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)
    )
    dual = _nonzero_conformal_point(comp_vectors, sigma)
    assert dual is not None, "both branches of the alternative failed"
    return MintyWitness("orthogonal", dual)


def _signed_point_in_span(span_vectors, sigma, strict: bool):
    if not span_vectors:
        return None
    k = len(span_vectors)
    rows = []
    for i in sigma.plus_set():
        rows.append((tuple(v[i] for v in span_vectors), Rel.GT if strict else Rel.GE))
    for i in sigma.minus_set():
        rows.append((tuple(v[i] for v in span_vectors), Rel.LT if strict else Rel.LE))
    wit = feasible(make_system(k, rows))
    if wit is None:
        return None
    point = tuple(
        sum((wit.point[j] * span_vectors[j][i] for j in range(k)), Fraction(0))
        for i in range(sigma.n)
    )
    return point


def _nonzero_conformal_point(span_vectors, sigma):
    if not span_vectors:
        return None
    k = len(span_vectors)
    n = sigma.n
    rows = []
    weight = [Fraction(0)] * k
    for i in range(n):
        form = tuple(v[i] for v in span_vectors)
        s = sigma[i]
        if s > 0:
            rows.append((form, Rel.GE))
            weight = [w + f for w, f in zip(weight, form)]
        elif s < 0:
            rows.append((form, Rel.LE))
            weight = [w - f for w, f in zip(weight, form)]
        else:
            rows.append((form, Rel.EQ))
    rows.append((tuple(weight), Rel.GT))
    wit = feasible(make_system(k, rows))
    if wit is None:
        return None
    return tuple(
        sum((wit.point[j] * span_vectors[j][i] for j in range(k)), Fraction(0))
        for i in range(n)
    )


def is_interior_point(W: RationalMatrix, y: Vec, cap: int = 12) -> bool:
    """y in the interior of cone(columns of W): strictly positive at every
    facet's supporting functional."""
    if len(y) != W.rows:
        raise InputError("point dimension differs from the cone's ambient dimension")
    faces = nonneg_part(covectors(W, cap))
    facets = minimal_support_members(faces)
    for tau in facets:
        x = realize_sign_vector(W, tau)
        assert x is not None, "face covector without a supporting functional"
        if dot(x, y) <= 0:
            return False
    return True
