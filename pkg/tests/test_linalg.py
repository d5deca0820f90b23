from fractions import Fraction
from itertools import product

from hypothesis import given, settings
from hypothesis import strategies as st

from coclass_lab.fields import FieldSpec
from coclass_lab.linalg import (
    Matrix,
    Subspace,
    invert,
    is_invertible,
    kernel,
    rank,
    rref,
    solve_affine,
    subspace_intersect,
    subspace_sum,
)

F3 = FieldSpec.prime(3)
F5 = FieldSpec.prime(5)
Q = FieldSpec.rational()


def all_vectors(p, n):
    return list(product(range(p), repeat=n))


# -- rref -------------------------------------------------------------------


def test_rref_identity_fixed_point():
    m = Matrix.identity(F3, 3)
    assert rref(m) == m


def test_rref_zero_fixed_point():
    m = Matrix.zeros(F3, 2, 4)
    assert rref(m) == m


def test_rref_hand_reduction():
    # pivot scaling uses 2*2 = 4 = 1 mod 3
    m = Matrix.from_rows(F3, [[2, 1], [1, 2]])
    assert rref(m).rows == ((1, 2), (0, 0))
    assert rank(m) == 1  # independent rank oracle: rows are proportional


def test_rref_rational():
    m = Matrix.from_rows(Q, [[2, 4], [1, 3]])
    assert rref(m).rows == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


# -- kernel -----------------------------------------------------------------


def test_kernel_identity_is_zero_space():
    assert kernel(Matrix.identity(F3, 4)).dim == 0


def test_kernel_zero_matrix_full_space():
    k = kernel(Matrix.zeros(F3, 2, 3))
    assert k.dim == 3 and k.ambient_dim == 3


def test_kernel_hand_example_with_exhaustive_oracle():
    m = Matrix.from_rows(F3, [[1, 1, 0]])
    k = kernel(m)
    assert k.basis.rows == ((1, 2, 0), (0, 0, 1))
    # oracle: all 27 vectors of F3^3 mapping to zero
    expected = {v for v in all_vectors(3, 3) if (v[0] + v[1]) % 3 == 0}
    assert set(k.enumerate_vectors()) == expected


# -- solve_affine -----------------------------------------------------------


def test_solve_identity():
    sol = solve_affine(Matrix.identity(F3, 3), (1, 2, 0))
    assert sol.particular == (1, 2, 0)
    assert sol.homogeneous.dim == 0


def test_solve_inconsistent():
    assert solve_affine(Matrix.zeros(F3, 2, 2), (1, 0)) is None


def test_solve_hand_example_with_enumeration_oracle():
    sol = solve_affine(Matrix.from_rows(F3, [[1, 1]]), (1,))
    assert sol.particular == (1, 0)
    assert sol.homogeneous.basis.rows == ((1, 2),)
    # oracle: enumerate F3^2
    expected = {v for v in all_vectors(3, 2) if (v[0] + v[1]) % 3 == 1}
    assert expected == {(1, 0), (2, 2), (0, 1)}
    points = set()
    base = sol.particular
    for c in range(3):
        points.add(tuple((b + c * h) % 3 for b, h in zip(base, sol.homogeneous.basis.rows[0])))
    assert points == expected


# -- subspace calculus ------------------------------------------------------


def test_sum_of_coordinate_lines():
    e1 = Subspace.from_vectors(F3, 3, [(1, 0, 0)])
    e2 = Subspace.from_vectors(F3, 3, [(0, 1, 0)])
    total = subspace_sum(e1, e2)
    assert total.basis.rows == ((1, 0, 0), (0, 1, 0))


def test_intersect_coordinate_planes():
    a = Subspace.from_vectors(F3, 3, [(1, 0, 0), (0, 1, 0)])
    b = Subspace.from_vectors(F3, 3, [(0, 1, 0), (0, 0, 1)])
    assert subspace_intersect(a, b).basis.rows == ((0, 1, 0),)


def test_contains_scaled_vector():
    s = Subspace.from_vectors(F3, 2, [(1, 1)])
    assert s.contains((2, 2))  # (2,2) = 2*(1,1)
    assert not s.contains((1, 2))


def test_subspace_equality_is_canonical():
    a = Subspace.from_vectors(F3, 2, [(1, 1), (2, 2)])
    b = Subspace.from_vectors(F3, 2, [(2, 2)])
    assert a == b
    assert hash(a) == hash(b)


def test_contains_agrees_with_exhaustive_membership():
    basis = [(1, 2, 0), (0, 1, 1)]
    s = Subspace.from_vectors(F3, 3, basis)
    explicit = set()
    for a in range(3):
        for b in range(3):
            explicit.add(tuple((a * x + b * y) % 3 for x, y in zip(*basis)))
    for v in all_vectors(3, 3):
        assert s.contains(v) == (v in explicit)


# -- invert -----------------------------------------------------------------


def test_invert_singular_returns_none():
    assert invert(Matrix.from_rows(F3, [[1, 2], [2, 4]])) is None
    assert not is_invertible(Matrix.from_rows(F3, [[1, 2], [2, 4]]))


def test_invert_times_matrix_is_identity():
    m = Matrix.from_rows(F5, [[1, 2], [3, 4]])
    inv = invert(m)
    assert inv @ m == Matrix.identity(F5, 2)


# -- property tests ---------------------------------------------------------

fields = st.sampled_from([F3, F5])


@st.composite
def small_matrix(draw, field=None):
    f = draw(fields) if field is None else field
    rows = draw(st.integers(1, 4))
    cols = draw(st.integers(1, 4))
    entries = draw(
        st.lists(
            st.lists(st.integers(-6, 6), min_size=cols, max_size=cols),
            min_size=rows,
            max_size=rows,
        )
    )
    return Matrix.from_rows(f, entries)


@given(small_matrix())
@settings(max_examples=150, deadline=None)
def test_rref_idempotent(m):
    r = rref(m)
    assert rref(r) == r


@given(small_matrix())
@settings(max_examples=150, deadline=None)
def test_rank_nullity(m):
    assert rank(m) + kernel(m).dim == m.ncols


@given(small_matrix())
@settings(max_examples=100, deadline=None)
def test_kernel_vectors_annihilated(m):
    k = kernel(m)
    for row in k.basis.rows:
        assert not any(m.apply(row))


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_sum_intersect_dimension_formula(data):
    f = data.draw(fields)
    n = data.draw(st.integers(1, 4))
    vs_a = data.draw(st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n), max_size=3))
    vs_b = data.draw(st.lists(st.lists(st.integers(0, 6), min_size=n, max_size=n), max_size=3))
    a = Subspace.from_vectors(f, n, vs_a)
    b = Subspace.from_vectors(f, n, vs_b)
    total = subspace_sum(a, b)
    meet = subspace_intersect(a, b)
    assert total.dim + meet.dim == a.dim + b.dim
    for row in meet.basis.rows:
        assert a.contains(row) and b.contains(row)


@given(st.data())
@settings(max_examples=75, deadline=None)
def test_invert_round_trip(data):
    f = data.draw(st.sampled_from([F3, F5, Q]))
    n = data.draw(st.integers(1, 3))
    entries = data.draw(
        st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
    )
    m = Matrix.from_rows(f, entries)
    inv = invert(m)
    if inv is None:
        assert rank(m) < n
    else:
        assert inv @ m == Matrix.identity(f, n)


def test_solve_affine_agrees_with_enumeration_dim3():
    # oracle sweep over all small systems with fixed shapes
    for rows in product(all_vectors(3, 3), repeat=2):
        m = Matrix.from_rows(F3, rows)
        b = (1, 2)
        sol = solve_affine(m, b)
        expected = {
            v
            for v in all_vectors(3, 3)
            if tuple(sum(r[i] * v[i] for i in range(3)) % 3 for r in rows) == b
        }
        if sol is None:
            assert not expected
        else:
            got = set()
            for coeffs in product(range(3), repeat=sol.homogeneous.dim):
                v = list(sol.particular)
                for c, h in zip(coeffs, sol.homogeneous.basis.rows):
                    v = [(x + c * y) % 3 for x, y in zip(v, h)]
                got.add(tuple(v))
            assert got == expected
