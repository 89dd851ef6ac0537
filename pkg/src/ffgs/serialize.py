"""JSON documents for algebras, morphisms and triples.

Scalars are strings "a/b" (just "a" when the denominator is 1; residues mod p
as "k").  Laurent entries on the torus base are {"offset": k, "coeffs": [...]}
with coeffs[i] the coefficient of u^(offset + i).  Documents may reference
other documents by a path relative to their own file, or embed them inline.
The layout is described in docs/schema.md.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema

from .errors import SchemaError
from .hopf import HopfAlgebra, HopfMorphism, StructureTensors
from .laurent import LPoly
from .linalg import Matrix
from .rings import KINDS, BaseRing, Mod
from .torsors import AffineBase, Triple, TripleMorphism

SCALAR = {"oneOf": [{"type": "string", "pattern": r"^-?[0-9]+(/[0-9]+)?$"}, {"type": "integer"}]}
LAURENT = {
    "type": "object",
    "properties": {"offset": {"type": "integer"}, "coeffs": {"type": "array", "items": SCALAR}},
    "required": ["coeffs"],
    "additionalProperties": False,
}
ENTRY = {"oneOf": [SCALAR, LAURENT]}
VECTOR = {"type": "array", "items": SCALAR}
MATRIX = {"type": "array", "items": VECTOR}
BASE = {
    "type": "object",
    "properties": {
        "ring": {"enum": list(KINDS)},
        "p": {"type": "integer", "minimum": 2},
        "form": {"enum": ["point", "torus"]},
    },
    "required": ["ring"],
    "additionalProperties": False,
}
REF = {"oneOf": [{"type": "string"}, {"type": "object"}]}

ALGEBRA_SCHEMA = {
    "type": "object",
    "properties": {
        "base": BASE,
        "name": {"type": ["string", "null"]},
        "rank": {"type": "integer", "minimum": 1},
        "mult": {"type": "array", "items": MATRIX},
        "unit": VECTOR,
        "comult": MATRIX,
        "counit": VECTOR,
        "antipode": MATRIX,
    },
    "required": ["base", "rank", "mult", "unit", "comult", "counit", "antipode"],
    "additionalProperties": False,
}

MORPHISM_SCHEMA = {
    "type": "object",
    "properties": {"source": REF, "target": REF, "matrix": MATRIX, "name": {"type": ["string", "null"]}},
    "required": ["source", "target", "matrix"],
    "additionalProperties": False,
}

TRIPLE_SCHEMA = {
    "type": "object",
    "properties": {
        "base": BASE,
        "name": {"type": ["string", "null"]},
        "group": REF,
        "algebra": {
            "type": "object",
            "properties": {
                "rank": {"type": "integer", "minimum": 1},
                "mult": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": ENTRY}}},
                "unit": {"type": "array", "items": ENTRY},
            },
            "required": ["rank", "mult", "unit"],
            "additionalProperties": False,
        },
        "coaction": {"type": "array", "items": {"type": "array", "items": ENTRY}},
        "point": {"oneOf": [VECTOR, {"type": "null"}]},
    },
    "required": ["base", "group", "algebra", "coaction"],
    "additionalProperties": False,
}

TRIPLE_MORPHISM_SCHEMA = {
    "type": "object",
    "properties": {
        "source": REF,
        "target": REF,
        "alpha": {"type": "array", "items": {"type": "array", "items": ENTRY}},
        "beta": REF,
    },
    "required": ["source", "target", "alpha", "beta"],
    "additionalProperties": False,
}

SCHEMAS = {
    "hopf": ALGEBRA_SCHEMA,
    "morphism": MORPHISM_SCHEMA,
    "triple": TRIPLE_SCHEMA,
    "triple_morphism": TRIPLE_MORPHISM_SCHEMA,
}


def _pointer(parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def validate(doc, kind: str, where: str = ""):
    """Validate a document against its schema; SchemaError carries a JSON pointer."""
    validator = jsonschema.Draft202012Validator(SCHEMAS[kind])
    # report the most specific failure first
    errors = sorted(validator.iter_errors(doc),
                    key=lambda e: (-len(e.absolute_path), list(map(str, e.absolute_path)), e.message))
    if errors:
        e = errors[0]
        raise SchemaError(e.message, where + _pointer(e.absolute_path))


# ---------------------------------------------------------------------------
# Scalars and bases
# ---------------------------------------------------------------------------

def scalar_to_json(x) -> str:
    if isinstance(x, Mod):
        return str(x.v)
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def entry_to_json(base, x):
    if isinstance(base, AffineBase) and base.is_torus:
        off, coeffs = x.coefficients()
        return {"offset": off, "coeffs": [scalar_to_json(c) for c in coeffs]}
    return scalar_to_json(x)


def _scalar(ring: BaseRing, v, ptr):
    try:
        return ring.coerce(Fraction(v) if isinstance(v, str) else v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"bad scalar {v!r}: {exc}", ptr) from None


def _entry(base: AffineBase, v, ptr):
    F = base.coeff_field
    if isinstance(v, dict):
        if not base.is_torus:
            raise SchemaError("Laurent entry on a point base", ptr)
        coeffs = [_scalar(F, c, f"{ptr}/coeffs/{i}") for i, c in enumerate(v["coeffs"])]
        return LPoly.from_list(coeffs, F, v.get("offset", 0))
    x = _scalar(F, v, ptr)
    return LPoly.const(x, F) if base.is_torus else x


def _base(d, ptr) -> AffineBase:
    try:
        return AffineBase.from_dict(d)
    except (ValueError, TypeError) as exc:
        raise SchemaError(str(exc), ptr) from None


# ---------------------------------------------------------------------------
# Algebras and morphisms
# ---------------------------------------------------------------------------

def algebra_to_json(A: StructureTensors) -> dict:
    n = A.rank
    s = scalar_to_json
    mult = [[[s(x) for x in A.mult.rows[i * n + j]] for j in range(n)] for i in range(n)]
    return {
        "base": A.base.to_dict(),
        "name": A.name,
        "rank": n,
        "mult": mult,
        "unit": [s(x) for x in A.unit],
        "comult": [[s(x) for x in r] for r in A.comult.rows],
        "counit": [s(x) for x in A.counit],
        "antipode": [[s(x) for x in r] for r in A.antipode.rows],
    }


def _check_len(seq, n, ptr, what):
    if len(seq) != n:
        raise SchemaError(f"{what} has length {len(seq)}, expected {n}", ptr)


def algebra_from_json(doc, where: str = "") -> StructureTensors:
    validate(doc, "hopf", where)
    base = _base(doc["base"], where + "/base")
    if base.is_torus:
        raise SchemaError("group algebras live over a point base", where + "/base/form")
    R = base.scalar
    n = doc["rank"]
    _check_len(doc["mult"], n, where + "/mult", "mult")
    mult = []
    for i, row in enumerate(doc["mult"]):
        _check_len(row, n, f"{where}/mult/{i}", "mult row")
        for j, vec in enumerate(row):
            _check_len(vec, n, f"{where}/mult/{i}/{j}", "product vector")
            mult.append(tuple(_scalar(R, x, f"{where}/mult/{i}/{j}/{k}") for k, x in enumerate(vec)))
    _check_len(doc["unit"], n, where + "/unit", "unit")
    _check_len(doc["counit"], n, where + "/counit", "counit")
    _check_len(doc["comult"], n, where + "/comult", "comult")
    _check_len(doc["antipode"], n, where + "/antipode", "antipode")
    for i, r in enumerate(doc["comult"]):
        _check_len(r, n * n, f"{where}/comult/{i}", "comult row")
    for i, r in enumerate(doc["antipode"]):
        _check_len(r, n, f"{where}/antipode/{i}", "antipode row")
    vec = lambda key: tuple(_scalar(R, x, f"{where}/{key}/{k}") for k, x in enumerate(doc[key]))
    mat = lambda key, w: Matrix(R, [tuple(_scalar(R, x, f"{where}/{key}/{i}/{k}") for k, x in enumerate(r))
                                    for i, r in enumerate(doc[key])], w, coerce=False)
    args = (R, Matrix(R, mult, n, coerce=False), vec("unit"), mat("comult", n * n), vec("counit"),
            mat("antipode", n), doc.get("name"))
    A = HopfAlgebra(*args)
    if not A.is_commutative():
        raise SchemaError("algebra is not commutative", where + "/mult")
    return A


def matrix_to_json(M: Matrix, base=None):
    return [[entry_to_json(base, x) for x in r] for r in M.rows]


def morphism_to_json(f: HopfMorphism, source_ref, target_ref) -> dict:
    return {"source": source_ref, "target": target_ref,
            "matrix": [[scalar_to_json(x) for x in r] for r in f.matrix.rows]}


# ---------------------------------------------------------------------------
# Triples
# ---------------------------------------------------------------------------

def triple_to_json(t: Triple, group_ref) -> dict:
    m = t.rank
    B = t.base
    e = lambda x: entry_to_json(B, x)
    mult = [[[e(x) for x in t.mult.rows[i * m + j]] for j in range(m)] for i in range(m)]
    return {
        "base": B.to_dict(),
        "name": t.name,
        "group": group_ref,
        "algebra": {"rank": m, "mult": mult, "unit": [e(x) for x in t.unit]},
        "coaction": [[e(x) for x in r] for r in t.coaction.rows],
        "point": None if t.point is None else [scalar_to_json(x) for x in t.point],
    }


def triple_morphism_to_json(f: TripleMorphism, source_ref, target_ref, beta_ref) -> dict:
    return {"source": source_ref, "target": target_ref,
            "alpha": matrix_to_json(f.alpha, f.source.base), "beta": beta_ref}


# ---------------------------------------------------------------------------
# Loading with references
# ---------------------------------------------------------------------------

class Loader:
    """Parses documents from files, resolving references relative to each file."""

    def __init__(self):
        self._cache = {}

    def read(self, path):
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise SchemaError(f"cannot read {path}: {exc.strerror}", "") from None
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
                              "") from None

    def _resolve(self, ref, kind, here: Path, ptr):
        if isinstance(ref, str):
            p = (here / ref).resolve()
            key = (kind, str(p))
            if key not in self._cache:
                if not p.exists():
                    raise SchemaError(f"referenced file {ref} not found", ptr)
                self._cache[key] = self.parse(p, kind)
            return self._cache[key]
        return self.parse_doc(ref, kind, here, ptr)

    def parse(self, path, kind):
        path = Path(path)
        return self.parse_doc(self.read(path), kind, path.parent, "")

    def parse_doc(self, doc, kind, here: Path = Path("."), where: str = ""):
        if kind == "hopf":
            return algebra_from_json(doc, where)
        validate(doc, kind, where)
        if kind == "morphism":
            src = self._resolve(doc["source"], "hopf", here, where + "/source")
            tgt = self._resolve(doc["target"], "hopf", here, where + "/target")
            M = _scalar_matrix(src.base, doc["matrix"], tgt.rank, src.rank, where + "/matrix")
            if src.base != tgt.base:
                raise SchemaError("source and target over different bases", where + "/target")
            return HopfMorphism(src, tgt, M)
        if kind == "triple":
            return self._triple(doc, here, where)
        if kind == "triple_morphism":
            S = self._resolve(doc["source"], "triple", here, where + "/source")
            T = self._resolve(doc["target"], "triple", here, where + "/target")
            beta = self._resolve(doc["beta"], "morphism", here, where + "/beta")
            rows = doc["alpha"]
            _check_len(rows, T.rank, where + "/alpha", "alpha")
            out = []
            for i, r in enumerate(rows):
                _check_len(r, S.rank, f"{where}/alpha/{i}", "alpha row")
                out.append(tuple(_entry(S.base, x, f"{where}/alpha/{i}/{k}") for k, x in enumerate(r)))
            return TripleMorphism(S, T, Matrix(S.base, out, S.rank, coerce=False), beta)
        raise ValueError(f"unknown document kind {kind!r}")

    def _triple(self, doc, here, where):
        base = _base(doc["base"], where + "/base")
        G = self._resolve(doc["group"], "hopf", here, where + "/group")
        if G.base != base.scalar:
            raise SchemaError(f"group over {G.base}, triple over {base.scalar}", where + "/group")
        alg = doc["algebra"]
        m, n = alg["rank"], G.rank
        if m != n:
            raise SchemaError(f"algebra rank {m} differs from group rank {n}", where + "/algebra/rank")
        _check_len(alg["mult"], m, where + "/algebra/mult", "mult")
        mult = []
        for i, row in enumerate(alg["mult"]):
            _check_len(row, m, f"{where}/algebra/mult/{i}", "mult row")
            mult.append([])
            for j, vec in enumerate(row):
                p = f"{where}/algebra/mult/{i}/{j}"
                _check_len(vec, m, p, "product vector")
                mult[-1].append([_entry(base, x, f"{p}/{k}") for k, x in enumerate(vec)])
        _check_len(alg["unit"], m, where + "/algebra/unit", "unit")
        unit = [_entry(base, x, f"{where}/algebra/unit/{k}") for k, x in enumerate(alg["unit"])]
        _check_len(doc["coaction"], m, where + "/coaction", "coaction")
        coaction = []
        for i, r in enumerate(doc["coaction"]):
            _check_len(r, m * n, f"{where}/coaction/{i}", "coaction row")
            coaction.append([_entry(base, x, f"{where}/coaction/{i}/{k}") for k, x in enumerate(r)])
        point = doc.get("point")
        if point is not None:
            _check_len(point, m, where + "/point", "point")
            point = [_scalar(base.coeff_field, x, f"{where}/point/{k}") for k, x in enumerate(point)]
        return Triple.from_tables(base, G, mult, unit, coaction, point, name=doc.get("name"))


def _scalar_matrix(R, rows, nrows, ncols, ptr):
    _check_len(rows, nrows, ptr, "matrix")
    out = []
    for i, r in enumerate(rows):
        _check_len(r, ncols, f"{ptr}/{i}", "matrix row")
        out.append(tuple(_scalar(R, x, f"{ptr}/{i}/{k}") for k, x in enumerate(r)))
    return Matrix(R, out, ncols, coerce=False)


def parse_document(path, kind: str):
    """Parse and validate a document of the given kind ("hopf", "morphism", "triple", "triple_morphism")."""
    return Loader().parse(path, kind)


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write(path, doc):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(doc))
