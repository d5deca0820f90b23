"""Linear maps on a Lie algebra and the commuting/central predicates.

Every predicate returns a :class:`DefectReport` whose witness list is
empty exactly when the property holds; failures carry the basis indices
and the residual vector, so a verdict is always replayable by hand.

The commuting property [f(x), x] = 0 for all x is checked on the basis
via its quadratic-form decomposition: with B(x) = [f(x), x] and
S(x, y) = [f(x), y] + [f(y), x],

    B(sum a_i e_i) = sum a_i^2 B(e_i) + sum_{i<j} a_i a_j S(e_i, e_j),

so B(e_i) = 0 for all i together with S(e_i, e_j) = 0 for all i < j is
equivalent to the full quantified statement, over any field and at any
field size.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import modp
from .algebra import LieAlgebra
from .linalg import (
    Matrix,
    Vector,
    add_vec,
    basis_vec,
    invert,
    is_invertible,
    is_zero_vec,
    sub_vec,
    vec,
)

NOT_HOMOMORPHISM = "not_homomorphism"
NOT_INVERTIBLE = "not_invertible"
NOT_COMMUTING = "not_commuting"
NOT_CENTRAL = "not_central"


@dataclass(frozen=True)
class LinearMap:
    """n x n matrix acting on coordinates; column j is the image of e_j."""

    matrix: Matrix

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise ValueError("linear maps on L must be square")

    @staticmethod
    def from_images(algebra: LieAlgebra, images: Sequence) -> "LinearMap":
        cols = [vec(algebra.field, img) for img in images]
        if len(cols) != algebra.dim:
            raise ValueError("need one image per basis vector")
        return LinearMap(Matrix(algebra.field, tuple(zip(*cols))))

    @staticmethod
    def from_image_map(algebra: LieAlgebra, assignments: dict) -> "LinearMap":
        """Images from {basis index: [(index, coeff), ...]}; others fixed."""
        f = algebra.field
        images = []
        for j in range(algebra.dim):
            if j in assignments:
                img = [f.zero] * algebra.dim
                for k, c in assignments[j]:
                    img[k] = f.add(img[k], f.canon(c))
                images.append(tuple(img))
            else:
                images.append(basis_vec(f, algebra.dim, j))
        return LinearMap.from_images(algebra, images)

    @staticmethod
    def identity(algebra: LieAlgebra) -> "LinearMap":
        return LinearMap(Matrix.identity(algebra.field, algebra.dim))

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    def apply(self, v: Vector) -> Vector:
        return self.matrix.apply(vec(self.matrix.field, v))

    def image_of_basis(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix.rows)

    def key(self) -> tuple:
        """Flattened entries; the canonical sort key for member lists."""
        return tuple(x for row in self.matrix.rows for x in row)


@dataclass(frozen=True)
class DefectReport:
    """kind is None when the checked property holds (witnesses empty)."""

    kind: Optional[str]
    witnesses: tuple = ()

    @property
    def clean(self) -> bool:
        return not self.witnesses

    def __str__(self) -> str:
        if self.clean:
            return "clean"
        shown = ", ".join(f"{idx}: {res}" for idx, res in self.witnesses[:3])
        more = "" if len(self.witnesses) <= 3 else f" (+{len(self.witnesses) - 3} more)"
        return f"{self.kind} [{shown}{more}]"


def compose(f: LinearMap, g: LinearMap) -> LinearMap:
    """compose(f, g)(x) = f(g(x)): g is applied first."""
    return LinearMap(f.matrix @ g.matrix)


def inverse(f: LinearMap) -> LinearMap:
    inv = invert(f.matrix)
    if inv is None:
        raise ValueError("map is singular")
    return LinearMap(inv)


def is_homomorphism(algebra: LieAlgebra, f: LinearMap) -> DefectReport:
    """f([e_i, e_j]) = [f(e_i), f(e_j)] on basis pairs (bilinearity suffices)."""
    if f.dim != algebra.dim:
        raise ValueError("map/algebra dimension mismatch")
    witnesses = []
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            lhs = f.apply(algebra.bracket_basis(i, j))
            rhs = algebra.bracket(f.image_of_basis(i), f.image_of_basis(j))
            residual = sub_vec(algebra.field, lhs, rhs)
            if not is_zero_vec(residual):
                witnesses.append(((i, j), residual))
    return DefectReport(None if not witnesses else NOT_HOMOMORPHISM, tuple(witnesses))


def is_automorphism(algebra: LieAlgebra, f: LinearMap) -> DefectReport:
    """Homomorphism plus invertibility; singularity is witnessed by a kernel vector."""
    hom = is_homomorphism(algebra, f)
    if not hom.clean:
        return hom
    if not is_invertible(f.matrix):
        from .linalg import kernel

        witness = kernel(f.matrix).basis.rows[0]
        return DefectReport(NOT_INVERTIBLE, (((), witness),))
    return DefectReport(None)


def commuting_defect(algebra: LieAlgebra, f: LinearMap) -> DefectReport:
    """Residuals of B(e_i) = [f(e_i), e_i] and S(e_i, e_j), see module docstring."""
    witnesses = []
    images = [f.image_of_basis(i) for i in range(algebra.dim)]
    basis = [basis_vec(algebra.field, algebra.dim, i) for i in range(algebra.dim)]
    for i in range(algebra.dim):
        b = algebra.bracket(images[i], basis[i])
        if not is_zero_vec(b):
            witnesses.append(((i,), b))
    for i in range(algebra.dim):
        for j in range(i + 1, algebra.dim):
            s = add_vec(
                algebra.field,
                algebra.bracket(images[i], basis[j]),
                algebra.bracket(images[j], basis[i]),
            )
            if not is_zero_vec(s):
                witnesses.append(((i, j), s))
    return DefectReport(None if not witnesses else NOT_COMMUTING, tuple(witnesses))


def is_commuting(algebra: LieAlgebra, f: LinearMap) -> bool:
    """Commuting automorphism: automorphism with [f(x), x] = 0 for all x."""
    return is_automorphism(algebra, f).clean and commuting_defect(algebra, f).clean


def central_defect(algebra: LieAlgebra, f: LinearMap) -> DefectReport:
    """(f - id)(e_i) must land in the center for every i."""
    center = algebra.center()
    witnesses = []
    for i in range(algebra.dim):
        d = sub_vec(algebra.field, f.image_of_basis(i), basis_vec(algebra.field, algebra.dim, i))
        if not center.contains(d):
            witnesses.append(((i,), d))
    return DefectReport(None if not witnesses else NOT_CENTRAL, tuple(witnesses))


def is_central(algebra: LieAlgebra, f: LinearMap) -> DefectReport:
    aut = is_automorphism(algebra, f)
    if not aut.clean:
        return aut
    return central_defect(algebra, f)


def commuting_witness_vector(algebra: LieAlgebra, f: LinearMap, defect: DefectReport):
    """A single vector x with [f(x), x] != 0 recovered from a defect report.

    A diagonal failure B(e_i) != 0 yields x = e_i; a pure cross-term
    failure S(e_i, e_j) != 0 yields x = e_i + e_j, because
    B(e_i + e_j) = B(e_i) + B(e_j) + S(e_i, e_j).
    """
    if defect.clean:
        return None
    diag = {idx[0]: res for idx, res in defect.witnesses if len(idx) == 1}
    if diag:
        i = min(diag)
        x = basis_vec(algebra.field, algebra.dim, i)
    else:
        (i, j), _ = defect.witnesses[0]
        x = add_vec(
            algebra.field,
            basis_vec(algebra.field, algebra.dim, i),
            basis_vec(algebra.field, algebra.dim, j),
        )
    return x, algebra.bracket(f.apply(x), x)


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------

IDENTITY_NAMES = (
    "bracket_swap",                 # [f(x), y] = [x, f(y)]
    "displacement_swap",            # [f(x)-x, y] = [x, f(y)-y]
    "center_preserved",             # f(Z) inside Z
    "displacement_bracket_swap",    # [f(x)-x, [y,z]] = [f(y)-y, [x,z]]
    "double_bracket_vanishes",      # [y, [y, f(x)-x]] = 0, plus cross terms
    "double_bracket_factor",        # [f(x)-x, [y,z]] = 2 [z, [y, f(x)-x]]
    "displacement_kills_brackets",  # [f(x)-x, [y,z]] = 0
    "displacement_in_second_center",
)


@dataclass(frozen=True)
class IdentitySuiteReport:
    violations: dict

    @property
    def passed(self) -> bool:
        return all(not v for v in self.violations.values())

    def __str__(self) -> str:
        if self.passed:
            return "all identities hold"
        bad = {k: len(v) for k, v in self.violations.items() if v}
        return f"identity violations: {bad}"


def lemma_identity_suite(algebra: LieAlgebra, f: LinearMap) -> IdentitySuiteReport:
    """Check the full identity family satisfied by commuting automorphisms.

    Precondition: f must be a commuting automorphism (raises otherwise).
    All identities are multilinear or bilinearizable in the quantified
    vectors, so basis tuples suffice; the one quadratic slot (y in the
    double-bracket identity) is checked together with its polarized
    cross terms, same decomposition as the commuting predicate.
    """
    if not is_commuting(algebra, f):
        raise ValueError("identity suite requires a commuting automorphism")
    fld = algebra.field
    n = algebra.dim
    basis = [basis_vec(fld, n, i) for i in range(n)]
    images = [f.image_of_basis(i) for i in range(n)]
    disp = [sub_vec(fld, images[i], basis[i]) for i in range(n)]
    pair_brackets = [[algebra.bracket_basis(j, k) for k in range(n)] for j in range(n)]
    center = algebra.center()
    second = algebra.second_center()
    two = fld.add(fld.one, fld.one)

    v = {name: [] for name in IDENTITY_NAMES}

    for i in range(n):
        for j in range(n):
            lhs = algebra.bracket(images[i], basis[j])
            rhs = algebra.bracket(basis[i], images[j])
            r = sub_vec(fld, lhs, rhs)
            if not is_zero_vec(r):
                v["bracket_swap"].append(((i, j), r))
            lhs = algebra.bracket(disp[i], basis[j])
            rhs = algebra.bracket(basis[i], disp[j])
            r = sub_vec(fld, lhs, rhs)
            if not is_zero_vec(r):
                v["displacement_swap"].append(((i, j), r))

    for z in center.basis.rows:
        img = f.apply(z)
        if not center.contains(img):
            v["center_preserved"].append(((), img))

    # double bracket in y with polarization: Y[j, j2, i] = [e_j, [e_j2, d_i]]
    for i in range(n):
        inner = [algebra.bracket(basis[j2], disp[i]) for j2 in range(n)]
        for j in range(n):
            diag = algebra.bracket(basis[j], inner[j])
            if not is_zero_vec(diag):
                v["double_bracket_vanishes"].append(((i, j, j), diag))
            for j2 in range(j + 1, n):
                cross = add_vec(
                    fld,
                    algebra.bracket(basis[j], inner[j2]),
                    algebra.bracket(basis[j2], inner[j]),
                )
                if not is_zero_vec(cross):
                    v["double_bracket_vanishes"].append(((i, j, j2), cross))

    for i in range(n):
        lhs_row = [
            [algebra.bracket(disp[i], pair_brackets[j][k]) for k in range(n)] for j in range(n)
        ]
        for j in range(n):
            for k in range(n):
                lhs = lhs_row[j][k]
                swapped = algebra.bracket(disp[j], pair_brackets[i][k])
                r = sub_vec(fld, lhs, swapped)
                if not is_zero_vec(r):
                    v["displacement_bracket_swap"].append(((i, j, k), r))
                inner = algebra.bracket(basis[j], disp[i])
                rhs = algebra.bracket(basis[k], inner)
                r = sub_vec(fld, lhs, tuple(fld.mul(two, x) for x in rhs))
                if not is_zero_vec(r):
                    v["double_bracket_factor"].append(((i, j, k), r))
                if not is_zero_vec(lhs):
                    v["displacement_kills_brackets"].append(((i, j, k), lhs))

    for i in range(n):
        if not second.contains(disp[i]):
            v["displacement_in_second_center"].append(((i,), disp[i]))

    return IdentitySuiteReport({name: tuple(v[name]) for name in IDENTITY_NAMES})


def identity_suite_batch(algebra: LieAlgebra, mats: np.ndarray, chunk: int = 2048) -> dict:
    """Violation counts of the identity family over a (B, n, n) member batch.

    Same mathematics as :func:`lemma_identity_suite`, vectorized for
    prime fields so the suite can sweep every enumerated commuting
    automorphism of a catalog algebra.  Returns {identity name: count}.
    """
    p = algebra.field.p
    if not p:
        raise ValueError("batch suite needs a prime field")
    T = modp.structure_tensor(algebra)
    n = algebra.dim
    eye = np.eye(n, dtype=np.int64)
    cz = modp.subspace_constraints(algebra.center())
    cz2 = modp.subspace_constraints(algebra.second_center())
    zbasis = modp.matrix_to_array(algebra.center().basis) if algebra.center().dim else None
    counts = {name: 0 for name in IDENTITY_NAMES}
    for start in range(0, mats.shape[0], chunk):
        F = mats[start : start + chunk] % p
        D = (F - eye) % p
        S1 = np.einsum("bli,ljr->bijr", F, T)
        S2 = np.einsum("imr,bmj->bijr", T, F)
        counts["bracket_swap"] += int(np.count_nonzero(((S1 - S2) % p).any(axis=3)))
        Sd1 = np.einsum("bli,ljr->bijr", D, T)
        Sd2 = np.einsum("imr,bmj->bijr", T, D)
        counts["displacement_swap"] += int(np.count_nonzero(((Sd1 - Sd2) % p).any(axis=3)))
        if zbasis is not None and cz.shape[0]:
            imgs = np.einsum("brl,zl->brz", F, zbasis)
            res = np.einsum("cn,bnz->bcz", cz, imgs) % p
            counts["center_preserved"] += int(np.count_nonzero(res.any(axis=1)))
        X = np.einsum("bai,jkl,alr->bijkr", D, T, T) % p
        counts["displacement_bracket_swap"] += int(
            np.count_nonzero(((X - X.transpose(0, 2, 1, 3, 4)) % p).any(axis=4))
        )
        Y = np.einsum("pal,bai,jlr->bjpir", T, D, T) % p
        sym = (Y + Y.transpose(0, 2, 1, 3, 4)) % p
        counts["double_bracket_vanishes"] += int(np.count_nonzero(sym.any(axis=4)))
        rhs = 2 * Y.transpose(0, 3, 2, 1, 4)  # Y[b,k,j,i,r] -> axes (b,i,j,k,r)
        counts["double_bracket_factor"] += int(np.count_nonzero(((X - rhs) % p).any(axis=4)))
        counts["displacement_kills_brackets"] += int(np.count_nonzero(X.any(axis=4)))
        if cz2.shape[0]:
            res = np.einsum("cn,bni->bci", cz2, D) % p
            counts["displacement_in_second_center"] += int(np.count_nonzero(res.any(axis=1)))
    return counts
