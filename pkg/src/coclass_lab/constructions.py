"""Built-in algebra families, the default catalog, and catalog file I/O.

The catalog file format is line-oriented JSON, one entry per line::

    {"name": ..., "field": {"prime": 3} | "rational", "dim": n,
     "brackets": [{"i": 0, "j": 1, "terms": [{"k": 4, "c": 1}]}, ...],
     "tags": [...]}

Indices are 0-based and only i < j entries are accepted, so antisymmetry
is a property of the file format itself.  Scalars are integers (reduced
mod p) or "num/den" strings over the rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field
from pathlib import Path
from typing import Iterable

from .algebra import LieAlgebra
from .fields import FieldSpec


class CatalogError(ValueError):
    """Unparseable or invalid catalog file content."""


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------


def abelian(n: int, field: FieldSpec) -> LieAlgebra:
    """All brackets zero; class 1, coclass n - 1."""
    if n < 1:
        raise ValueError("abelian(n) needs n >= 1")
    return LieAlgebra(field, n, {}, labels=[f"e{i+1}" for i in range(n)])


def heisenberg(k: int, m: int, field: FieldSpec) -> LieAlgebra:
    """Basis u_1..u_2k, z_1..z_m with [u_{2i-1}, u_{2i}] = z_1, z_j central."""
    if k < 1 or m < 1:
        raise ValueError("heisenberg(k, m) needs k >= 1 and m >= 1")
    dim = 2 * k + m
    sc = {(2 * i, 2 * i + 1): ((2 * k, 1),) for i in range(k)}
    labels = [f"u{i+1}" for i in range(2 * k)] + [f"z{j+1}" for j in range(m)]
    return LieAlgebra(field, dim, sc, labels=labels)


def filiform(n: int, field: FieldSpec) -> LieAlgebra:
    """Basis u, v, v_1..v_{n-2} with [u, v] = v_1 and [u, v_i] = v_{i+1}."""
    if n < 3:
        raise ValueError("filiform(n) needs n >= 3")
    sc = {(0, 1): ((2, 1),)}
    for i in range(2, n - 1):
        sc[(0, i)] = ((i + 1, 1),)
    labels = ["u", "v"] + [f"v{i}" for i in range(1, n - 1)]
    return LieAlgebra(field, n, sc, labels=labels)


def dim5_example(field: FieldSpec) -> LieAlgebra:
    """Five-dimensional algebra with [x1, x2] = x5 = [x3, x4], all else zero."""
    sc = {(0, 1): ((4, 1),), (2, 3): ((4, 1),)}
    return LieAlgebra(field, 5, sc, labels=[f"x{i+1}" for i in range(5)])


def direct_sum(a: LieAlgebra, b: LieAlgebra) -> LieAlgebra:
    """Block-diagonal structure constants on the concatenated bases."""
    if a.field != b.field:
        raise ValueError("direct_sum needs matching fields")
    off = a.dim
    sc = dict(a.sc)
    for (i, j), terms in b.sc.items():
        sc[(i + off, j + off)] = tuple((k + off, c) for k, c in terms)
    left, right = list(a.labels), list(b.labels)
    if set(left) & set(right):
        left = [f"l.{s}" for s in left]
        right = [f"r.{s}" for s in right]
    return LieAlgebra(a.field, a.dim + b.dim, sc, labels=left + right)


def from_bracket_table(field: FieldSpec, dim: int, table, labels=None) -> LieAlgebra:
    """Algebra from [(i, j, [(k, c), ...]), ...] rows (0-based, i < j)."""
    sc = {(i, j): tuple(terms) for i, j, terms in table}
    return LieAlgebra(field, dim, sc, labels=labels)


def dim5_center2(field: FieldSpec) -> LieAlgebra:
    """Class-2 algebra of dimension 5 with a 2-dimensional center.

    [e1, e2] = e4 and [e1, e3] = e5; the center is span{e4, e5} = L'.
    """
    return from_bracket_table(field, 5, [(0, 1, [(3, 1)]), (0, 2, [(4, 1)])])


def coclass2_indecomposable(field: FieldSpec) -> LieAlgebra:
    """Indecomposable dimension-5 algebra of class 3 (coclass 2).

    [e1, e2] = e3, [e1, e3] = e5, [e2, e4] = e5.
    """
    return from_bracket_table(
        field, 5, [(0, 1, [(2, 1)]), (0, 2, [(4, 1)]), (1, 3, [(4, 1)])]
    )


def dim6_center1(field: FieldSpec) -> LieAlgebra:
    """Dimension-6, class-3 algebra with 1-dimensional center.

    [x1, x2] = x3, [x1, x3] = x6, [x4, x5] = x6.  Its second center
    span{x3, x4, x5, x6} is NOT abelian, and dim L' = dim - 4.
    """
    return from_bracket_table(
        field, 6, [(0, 1, [(2, 1)]), (0, 2, [(5, 1)]), (3, 4, [(5, 1)])],
        labels=[f"x{i+1}" for i in range(6)],
    )


def dim6_center2(field: FieldSpec) -> LieAlgebra:
    """Dimension-6, class-3 algebra with 2-dimensional center (abelian Z_2)."""
    return direct_sum(coclass2_indecomposable(field), abelian(1, field))


def dim6_center3(field: FieldSpec) -> LieAlgebra:
    """Dimension-6, class-3 algebra with 3-dimensional center (abelian Z_2).

    Free-nilpotent-of-class-3 flavor on two generators plus a central line:
    [e1, e2] = e3, [e1, e3] = e4, [e2, e3] = e5, e6 central.
    """
    return from_bracket_table(
        field, 6, [(0, 1, [(2, 1)]), (0, 2, [(3, 1)]), (1, 2, [(4, 1)])]
    )


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    algebra: LieAlgebra
    tags: tuple = dataclass_field(default_factory=tuple)


def _entry(name: str, algebra: LieAlgebra, *extra_tags: str) -> CatalogEntry:
    tags = [f"dim={algebra.dim}"]
    if algebra.is_nilpotent:
        tags.append(f"class={algebra.nilpotency_class()}")
        tags.append(f"coclass={algebra.coclass()}")
    tags.extend(extra_tags)
    return CatalogEntry(name, algebra, tuple(tags))


def default_catalog(field: FieldSpec) -> list:
    """The shipped catalog: every theorem's hypothesis space at desk scale."""
    entries = []
    for n in range(4, 9):
        entries.append(_entry(f"filiform_{n}", filiform(n, field), "family=filiform"))
    for k in (1, 2, 3):
        for m in (1, 2):
            entries.append(
                _entry(f"heisenberg_{k}_{m}", heisenberg(k, m, field), "family=heisenberg")
            )
    entries.append(_entry("dim5_example", dim5_example(field)))
    entries.append(
        _entry("filiform_4_plus_abelian_1", direct_sum(filiform(4, field), abelian(1, field)))
    )
    entries.append(
        _entry("filiform_5_plus_abelian_1", direct_sum(filiform(5, field), abelian(1, field)))
    )
    entries.append(_entry("coclass2_indecomposable", coclass2_indecomposable(field)))
    entries.append(_entry("dim5_center2", dim5_center2(field)))
    entries.append(_entry("dim6_center1", dim6_center1(field)))
    entries.append(_entry("dim6_center2", dim6_center2(field)))
    entries.append(_entry("dim6_center3", dim6_center3(field)))
    return entries


_BUILTIN_HELP = "abelian:N, heisenberg:K:M, filiform:N, dim5"


def builtin(name: str, field: FieldSpec) -> LieAlgebra:
    """Resolve a builtin algebra name like "filiform:5" or "heisenberg:2:1"."""
    parts = name.split(":")
    kind = parts[0]
    try:
        if kind == "abelian" and len(parts) == 2:
            return abelian(int(parts[1]), field)
        if kind == "heisenberg" and len(parts) == 3:
            return heisenberg(int(parts[1]), int(parts[2]), field)
        if kind == "filiform" and len(parts) == 2:
            return filiform(int(parts[1]), field)
        if kind == "dim5" and len(parts) == 1:
            return dim5_example(field)
        by_name = {
            "dim5_center2": dim5_center2,
            "coclass2_indecomposable": coclass2_indecomposable,
            "dim6_center1": dim6_center1,
            "dim6_center2": dim6_center2,
            "dim6_center3": dim6_center3,
        }
        if kind in by_name and len(parts) == 1:
            return by_name[kind](field)
    except ValueError as exc:
        raise CatalogError(f"bad builtin {name!r}: {exc}") from exc
    raise CatalogError(f"unknown builtin {name!r} (expected {_BUILTIN_HELP})")


def _field_from_json(obj) -> FieldSpec:
    from .fields import FieldError

    if obj == "rational":
        return FieldSpec.rational()
    if isinstance(obj, dict) and set(obj) == {"prime"}:
        try:
            return FieldSpec.prime(obj["prime"])
        except FieldError as exc:
            raise CatalogError(str(exc)) from exc
    raise CatalogError(f"bad field spec {obj!r}")


def _field_to_json(field: FieldSpec):
    return {"prime": field.p} if field.is_prime else "rational"


def entry_from_json(obj: dict) -> CatalogEntry:
    for key in ("name", "field", "dim", "brackets"):
        if key not in obj:
            raise CatalogError(f"missing key {key!r}")
    field = _field_from_json(obj["field"])
    dim = obj["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise CatalogError(f"bad dimension {dim!r}")
    sc = {}
    for block in obj["brackets"]:
        i, j = block.get("i"), block.get("j")
        if not (isinstance(i, int) and isinstance(j, int)):
            raise CatalogError(f"bad bracket indices in {block!r}")
        if i >= j:
            raise CatalogError(f"bracket indices need i < j, got ({i}, {j})")
        if (i, j) in sc:
            raise CatalogError(f"duplicate bracket block ({i}, {j})")
        terms = [(t["k"], field.parse(t["c"])) for t in block.get("terms", ())]
        sc[(i, j)] = tuple(terms)
    try:
        algebra = LieAlgebra(field, dim, sc)
    except ValueError as exc:
        raise CatalogError(str(exc)) from exc
    tags = tuple(obj.get("tags", ()))
    return CatalogEntry(obj["name"], algebra, tags)


def entry_to_json(entry: CatalogEntry) -> dict:
    alg = entry.algebra
    brackets = [
        {"i": i, "j": j, "terms": [{"k": k, "c": alg.field.unparse(c)} for k, c in terms]}
        for (i, j), terms in sorted(alg.sc.items())
    ]
    return {
        "name": entry.name,
        "field": _field_to_json(alg.field),
        "dim": alg.dim,
        "brackets": brackets,
        "tags": list(entry.tags),
    }


def load_catalog(path) -> list:
    """Parse and validate a JSONL catalog; any Jacobi violation is fatal."""
    entries = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CatalogError(f"{path}:{lineno}: not valid JSON ({exc})") from exc
            try:
                entry = entry_from_json(obj)
            except CatalogError as exc:
                raise CatalogError(f"{path}:{lineno}: {exc}") from exc
            violations = entry.algebra.validate()
            if violations:
                detail = "; ".join(str(v) for v in violations)
                raise CatalogError(f"{path}:{lineno}: entry {entry.name!r} invalid: {detail}")
            entries.append(entry)
    return entries


def save_catalog(entries: Iterable[CatalogEntry], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for entry in entries:
            handle.write(json.dumps(entry_to_json(entry), sort_keys=True))
            handle.write("\n")


def shipped_data_path(name: str) -> Path:
    """Path of a catalog file shipped inside the package."""
    path = Path(__file__).parent / "data" / name
    if not path.exists():
        raise FileNotFoundError(f"no shipped data file {name!r}")
    return path
