import random
from itertools import product

import pytest

from expbij.linalg import RationalMatrix, SubspaceBasis, dot, kernel_basis, rank, vec
from expbij.matroid import (
    chirotope,
    circuits,
    cocircuits,
    cocircuits_from_chirotope,
    conformal_decompose,
    covectors,
    face_lattice,
    is_interior_point,
    minty_alternative,
    oriented_matroid,
    vectors,
)
from expbij.signs import (
    SignVector,
    all_sign_vectors,
    minimal_support_members,
    orthogonal_set,
    sign_of,
)

S = SignVector.from_string
M = RationalMatrix


def _random_full_rank(rng, d, n):
    while True:
        mat = M([[rng.randint(-3, 3) for _ in range(n)] for _ in range(d)])
        if rank(mat) == d:
            return mat


def test_chirotope_examples():
    chi = chirotope(M([[1, 0, -1], [0, 1, -1]]))
    assert chi.value((0, 1)) == 1
    assert chi.value((0, 2)) == -1
    assert chi.value((1, 2)) == 1
    assert chi.value((1, 0)) == -1  # alternating
    assert chi.value((0, 0)) == 0

    chi = chirotope(M([[1, 0], [0, 1]]))
    assert chi.value((0, 1)) == 1

    chi = chirotope(M([[1, 1, -1]]))
    assert [chi.value((j,)) for j in range(3)] == [1, 1, -1]

    with pytest.raises(Exception):
        chirotope(M([[1, 1], [1, 1]]))


def test_cocircuits_from_chirotope_examples():
    chi = chirotope(M([[1, 0, -1], [0, 1, -1]]))
    assert cocircuits_from_chirotope(chi) == {
        S("0+-"), S("0-+"), S("-0+"), S("+0-"), S("+-0"), S("-+0"),
    }
    chi = chirotope(M([[1, 1, -1]]))
    assert cocircuits_from_chirotope(chi) == {S("++-"), S("--+")}
    chi = chirotope(M([[1, 0], [0, 1]]))
    assert cocircuits_from_chirotope(chi) == {S("+0"), S("-0"), S("0+"), S("0-")}


def test_circuits_examples():
    assert circuits(M([[1, 1, -1]])) == {
        S("+0+"), S("-0-"), S("0++"), S("0--"), S("+-0"), S("-+0"),
    }
    assert circuits(M([[1, 0], [0, 1]])) == set()
    assert circuits(M([[1, 0, -1], [0, 1, -1]])) == {S("+++"), S("---")}


def test_circuits_cocircuits_duality_random():
    rng = random.Random(2718)
    for _ in range(30):
        d = rng.randint(1, 4)
        n = rng.randint(d, min(d + 3, 7))
        W = _random_full_rank(rng, d, n)
        assert cocircuits(W) == cocircuits_from_chirotope(chirotope(W))
        ker = kernel_basis(W)
        if ker.dim:
            K = M(ker.vectors)
            assert circuits(W) == cocircuits(K)  # sign(ker W) = sign(im K^T)


def test_vector_enumeration_against_grid():
    W = M([[1, 1, -1]])
    vecs = vectors(W)
    grid = set()
    for a, b in product(range(-2, 3), repeat=2):
        grid.add(sign_of([a, b, a + b]))
    assert vecs == grid
    assert len(vecs) == 13  # 12 nonzero plus zero

    assert covectors(M([[1, 0], [0, 1]])) == set(all_sign_vectors(2))
    assert covectors(W) == orthogonal_set(vecs, 3)


def test_vectors_covectors_orthogonal_pairs_random():
    rng = random.Random(321)
    for _ in range(12):
        d = rng.randint(1, 3)
        n = rng.randint(d, min(d + 3, 6))
        W = _random_full_rank(rng, d, n)
        V = vectors(W)
        C = covectors(W)
        assert C == orthogonal_set(V, n)
        assert V == orthogonal_set(C, n)
        assert minimal_support_members(V) == circuits(W)
        assert minimal_support_members(C) == cocircuits(W)
        for a in V:
            assert -a in V
            for b in V:
                assert a.compose(b) in V


def test_oriented_matroid_consistency():
    om = oriented_matroid(M([[1, 0, -1], [0, 1, -1]]))
    assert om.circuits == {S("+++"), S("---")}
    assert om.cocircuits == cocircuits_from_chirotope(om.chirotope)
    assert SignVector.zero(3) in om.vectors and SignVector.zero(3) in om.covectors


def test_conformal_decompose_examples():
    W = M([[1, 1, -1]])
    assert conformal_decompose(W, SignVector.zero(3)) == []

    out = conformal_decompose(W, S("+0+"))
    assert out == [S("+0+")]

    out = conformal_decompose(W, S("+++"))
    assert sorted(map(str, out)) == ["+0+", "0++"]
    composed = out[0]
    for rho in out[1:]:
        assert rho.leq(S("+++")) or rho == S("+++")
        composed = composed.compose(rho)
    assert composed == S("+++")

    with pytest.raises(Exception):
        conformal_decompose(W, S("++0"))  # not a kernel sign vector


def test_conformal_decompose_bound_random():
    rng = random.Random(555)
    for _ in range(10):
        d = rng.randint(1, 3)
        n = rng.randint(d + 1, min(d + 3, 6))
        W = _random_full_rank(rng, d, n)
        circ = circuits(W)
        dim_ker = n - d
        for tau in vectors(W):
            if tau.is_zero():
                continue
            parts = conformal_decompose(W, tau, circ)
            assert len(parts) <= min(dim_ker, len(tau.support_set()))
            for rho in parts:
                assert rho.leq(tau)


def test_face_lattice_examples():
    # quadrant: all four faces, pointed, robustly generated
    fl = face_lattice(M([[1, 0], [0, 1]]))
    assert fl.faces == frozenset({S("00"), S("+0"), S("0+"), S("++")})
    assert fl.pointed and fl.robustly_generated and fl.all_plus
    assert fl.lineality_dim == 0 and not fl.full_space

    # full plane: only the zero face
    fl = face_lattice(M([[1, -1, 0, 0], [0, 0, 1, -1]]))
    assert fl.faces == frozenset({S("0000")})
    assert fl.full_space and fl.lineality_dim == 2 and not fl.pointed

    # first-quadrant cone with three generators
    fl = face_lattice(M([[1, 1, 0], [0, 1, 1]]))
    assert fl.faces == frozenset({S("000"), S("0++"), S("++0"), S("+++")})
    assert fl.pointed and fl.all_plus

    # half-plane: lineality line, not robustly generated
    fl = face_lattice(M([[1, 0, -1], [0, 1, 0]]))
    assert fl.faces == frozenset({S("000"), S("0+0")})
    assert fl.lineality_dim == 1 and not fl.pointed and not fl.robustly_generated


def test_robustly_generated_cases():
    # duplicated generator on an extreme ray
    fl = face_lattice(M([[1, 0, 2], [0, 1, 0]]))
    assert not fl.robustly_generated
    # interior generator is fine
    fl = face_lattice(M([[1, 0, 1], [0, 1, 1]]))
    assert fl.robustly_generated
    # d = 1 short-circuits
    fl = face_lattice(M([[1, 1, -1]]))
    assert fl.robustly_generated
    # zero column in a pointed cone
    fl = face_lattice(M([[1, 0, 0], [0, 1, 0]]))
    assert not fl.robustly_generated


def test_face_order_reversal_random():
    rng = random.Random(777)
    for _ in range(10):
        d = rng.randint(2, 3)
        n = rng.randint(d, min(d + 3, 6))
        W = _random_full_rank(rng, d, n)
        fl = face_lattice(W)
        for t1 in fl.faces:
            for t2 in fl.faces:
                face1 = set(t1.zero_set())
                face2 = set(t2.zero_set())
                if t2.leq(t1):
                    assert face1 <= face2  # order reversed


def test_minty_examples():
    ker = kernel_basis(M([[1, 1, -1]]))
    wit = minty_alternative(ker, S("++-"))
    assert wit.branch == "orthogonal"
    assert sign_of(wit.vector).leq(S("++-"))
    assert dot(wit.vector, vec([1, 0, 1])) == 0 and dot(wit.vector, vec([0, 1, 1])) == 0

    full = SubspaceBasis(2, (vec([1, 0]), vec([0, 1])))
    wit = minty_alternative(full, S("+-"))
    assert wit.branch == "subspace" and wit.vector[0] > 0 and wit.vector[1] < 0

    wit = minty_alternative(SubspaceBasis(1, ()), S("+"))
    assert wit.branch == "orthogonal" and wit.vector[0] > 0


def test_minty_totality_random():
    rng = random.Random(909)
    for _ in range(8):
        n = rng.randint(2, 4)
        dim = rng.randint(0, n)
        basis_rows = ()
        while dim:
            mat = M([[rng.randint(-2, 2) for _ in range(n)] for _ in range(dim)])
            if rank(mat) == dim:
                basis_rows = mat.row_tuples
                break
        basis = SubspaceBasis(n, basis_rows)
        for sigma in all_sign_vectors(n):
            if sigma.is_zero():
                continue
            wit = minty_alternative(basis, sigma)
            if wit.branch == "subspace":
                assert basis.contains(wit.vector)
                for i in sigma.plus_set():
                    assert wit.vector[i] > 0
                for i in sigma.minus_set():
                    assert wit.vector[i] < 0
            else:
                assert not all(x == 0 for x in wit.vector)
                assert sign_of(wit.vector).leq(sigma)
                for b in basis.vectors:
                    assert dot(wit.vector, b) == 0


def test_is_interior_point_examples():
    ident = M([[1, 0], [0, 1]])
    assert is_interior_point(ident, vec([1, 1]))
    assert not is_interior_point(ident, vec([1, 0]))
    assert not is_interior_point(ident, vec([-1, 1]))

    W = M([[1, 0, -1], [0, 1, 0]])
    assert is_interior_point(W, vec([0, 1]))
    assert not is_interior_point(W, vec([1, 0]))

    # full space: everything is interior
    assert is_interior_point(M([[1, -1, 0, 0], [0, 0, 1, -1]]), vec([5, -7]))
