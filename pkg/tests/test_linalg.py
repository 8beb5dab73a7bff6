import random
from fractions import Fraction

import pytest

from expbij.linalg import (
    InputError,
    RationalMatrix,
    SubspaceBasis,
    frac,
    frac_str,
    intersection_dim,
    kernel_basis,
    matrix_with_kernel,
    maximal_minors,
    rank,
    row_space_basis,
    vec,
)


def M(entries):
    return RationalMatrix(entries)


def test_frac_parsing():
    assert frac(3) == Fraction(3)
    assert frac("2/4") == Fraction(1, 2)  # normalized on load
    assert frac("-7/3") == Fraction(-7, 3)
    assert frac_str(Fraction(-7, 3)) == "-7/3"
    assert frac_str(Fraction(4, 2)) == "2"
    with pytest.raises(InputError):
        frac("1/0")
    with pytest.raises(InputError):
        frac("1/-2")
    with pytest.raises(InputError):
        frac("x")


def test_rank_examples():
    assert rank(M([[1, 0], [0, 1]])) == 2
    assert rank(M([[1, 1, -1]])) == 1
    # third row is the sum of the first two
    assert rank(M([[1, 0, -1], [0, 1, -1], [1, 1, -2]])) == 2


def test_kernel_basis_examples():
    B = kernel_basis(M([[1, 1, -1]]))
    assert B.dim == 2
    for v in B.vectors:
        assert M([[1, 1, -1]]).mat_vec(v) == (0,)
    # same subspace as the stated basis
    assert B.same_subspace(SubspaceBasis(3, (vec([1, 0, 1]), vec([0, 1, 1]))))

    assert kernel_basis(M([[1, 0], [0, 1]])).dim == 0

    B2 = kernel_basis(M([[1, 0, -1]]))
    assert B2.dim == 2
    assert B2.contains(vec([1, 0, 1]))
    assert B2.contains(vec([0, 1, 0]))


def test_row_space_basis_examples():
    B = row_space_basis(M([[1, 1, -1]]))
    assert B.dim == 1 and B.contains(vec([1, 1, -1]))

    B = row_space_basis(M([[1, 0], [0, 1]]))
    assert B.vectors == (vec([1, 0]), vec([0, 1]))

    W = M([[1, 0, -1], [0, 1, -1]])
    rows = row_space_basis(W)
    ker = kernel_basis(W)
    assert rows.dim == 2 and ker.dim == 1
    for u in rows.vectors:
        for v in ker.vectors:
            assert sum(a * b for a, b in zip(u, v)) == 0


def test_maximal_minors_examples():
    mins = maximal_minors(M([[1, 0, -1], [0, 1, -1]]))
    assert mins == {(0, 1): 1, (0, 2): -1, (1, 2): 1}

    assert maximal_minors(M([[1, 0], [0, 1]])) == {(0, 1): 1}

    mins = maximal_minors(M([[1, 1, -1]]))
    assert mins == {(0,): 1, (1,): 1, (2,): -1}

    # cofactor oracle on the first example
    W = M([[1, 0, -1], [0, 1, -1]])
    for (i, j), val in maximal_minors(W).items():
        a, b = W.column(i), W.column(j)
        assert val == a[0] * b[1] - a[1] * b[0]


def test_matrix_with_kernel_examples():
    B = SubspaceBasis(3, (vec([1, 0, 1]), vec([0, 1, 1])))
    W = matrix_with_kernel(B)
    assert W.rows == 1 and W.cols == 3
    for v in B.vectors:
        assert W.mat_vec(v) == (0,)
    # proportional to (1,1,-1)
    r = W.row(0)
    assert r[0] != 0 and (r[1] / r[0], r[2] / r[0]) == (1, -1)

    W = matrix_with_kernel(SubspaceBasis(2, ()))
    assert W.rows == 2 and W.det() != 0

    W = matrix_with_kernel(SubspaceBasis(2, (vec([1, 1]),)))
    assert W.rows == 1
    assert W.row(0)[0] == -W.row(0)[1] != 0


def test_matrix_with_kernel_rejects_dependent():
    with pytest.raises(InputError):
        SubspaceBasis(3, (vec([1, 0, 1]), vec([2, 0, 2])))


def _random_matrix(rng, d, n):
    while True:
        mat = M([[rng.randint(-3, 3) for _ in range(n)] for _ in range(d)])
        if rank(mat) == d:
            return mat


def test_rank_nullity_and_kernel_roundtrip():
    rng = random.Random(20240811)
    for _ in range(60):
        d = rng.randint(1, 4)
        n = rng.randint(d, d + 4)
        mat = _random_matrix(rng, d, n)
        ker = kernel_basis(mat)
        assert rank(mat) + ker.dim == n  # rank-nullity, exact
        for v in ker.vectors:
            assert all(x == 0 for x in mat.mat_vec(v))
        if ker.dim < n:
            W2 = matrix_with_kernel(ker)
            assert kernel_basis(W2).same_subspace(ker)


def test_minors_row_permutation_single_global_sign():
    rng = random.Random(7)
    for _ in range(25):
        d = rng.randint(2, 4)
        n = rng.randint(d, d + 3)
        mat = _random_matrix(rng, d, n)
        perm = list(range(d))
        rng.shuffle(perm)
        permuted = M([mat.row(i) for i in perm])
        base = maximal_minors(mat)
        other = maximal_minors(permuted)
        ratios = {key for key in base if base[key] != 0}
        signs = {1 if other[key] / base[key] > 0 else -1 for key in ratios}
        assert len(signs) <= 1
        for key in base:
            if base[key] == 0:
                assert other[key] == 0


def test_det_bareiss_against_cofactor():
    rng = random.Random(99)
    for _ in range(40):
        d = rng.randint(1, 3)
        mat = M([[Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)] for _ in range(d)])
        if d == 1:
            expected = mat.entry(0, 0)
        elif d == 2:
            expected = mat.entry(0, 0) * mat.entry(1, 1) - mat.entry(0, 1) * mat.entry(1, 0)
        else:
            expected = (
                mat.entry(0, 0) * (mat.entry(1, 1) * mat.entry(2, 2) - mat.entry(1, 2) * mat.entry(2, 1))
                - mat.entry(0, 1) * (mat.entry(1, 0) * mat.entry(2, 2) - mat.entry(1, 2) * mat.entry(2, 0))
                + mat.entry(0, 2) * (mat.entry(1, 0) * mat.entry(2, 1) - mat.entry(1, 1) * mat.entry(2, 0))
            )
        assert mat.det() == expected


def test_matrix_json_roundtrip_and_validation():
    mat = M([[1, "1/2"], ["-3/4", 0]])
    obj = mat.to_json_dict()
    assert obj == {"rows": 2, "cols": 2, "entries": [[1, "1/2"], ["-3/4", 0]]}
    assert RationalMatrix.from_json_dict(obj) == mat
    with pytest.raises(InputError):
        RationalMatrix.from_json_dict({"rows": 3, "cols": 2, "entries": [[1, 2]]})
    with pytest.raises(InputError):
        RationalMatrix.from_json_dict({"entries": [[1, "1/0"]]})
    with pytest.raises(InputError):
        RationalMatrix.from_json_dict({"entries": []})


def test_intersection_dim():
    A = SubspaceBasis(3, (vec([1, 0, 0]), vec([0, 1, 0])))
    B = SubspaceBasis(3, (vec([0, 1, 0]), vec([0, 0, 1])))
    assert intersection_dim(A, B) == 1
    assert intersection_dim(A, SubspaceBasis(3, ())) == 0
