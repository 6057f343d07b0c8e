"""Information systems, granules, binary relations and MMERs.

Everything here is immutable after construction. Object sets (blocks,
neighborhoods, extensions) are read-only boolean numpy vectors indexed by
object position; identifiers are only kept for I/O.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

import numpy as np

Value = Hashable


class GranularError(Exception):
    """Base class for all errors raised by this package."""


class DescriptorError(GranularError, ValueError):
    pass


class UndefinedRatioError(GranularError, ZeroDivisionError):
    """A support, approximation or confidence whose denominator is empty."""


class SchemaError(GranularError, ValueError):
    pass


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or float.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def ratio_at_least(num, den, threshold: Fraction):
    """``num / den >= threshold`` by integer cross-multiplication.

    Works elementwise on integer arrays as well as on plain ints.
    """
    return num * threshold.denominator >= threshold.numerator * den


class Kind(enum.Enum):
    NOMINAL = "nominal"
    SCALED = "scaled"


@dataclass(frozen=True)
class AttributeSchema:
    name: str
    kind: Kind
    domain: tuple = ()

    def __post_init__(self):
        if self.kind is Kind.SCALED:
            if self.domain not in ((), (0, 1)):
                raise SchemaError(f"scaled attribute {self.name!r} must have domain (0, 1)")
            object.__setattr__(self, "domain", (0, 1))
        elif len(set(self.domain)) != len(self.domain):
            raise SchemaError(f"duplicate values in domain of {self.name!r}")

    @classmethod
    def nominal(cls, name: str, domain: Iterable[Value]) -> AttributeSchema:
        return cls(name, Kind.NOMINAL, tuple(domain))

    @classmethod
    def scaled(cls, name: str) -> AttributeSchema:
        return cls(name, Kind.SCALED)

    @property
    def is_scaled(self) -> bool:
        return self.kind is Kind.SCALED

    def code(self, value: Value) -> int:
        try:
            return self.domain.index(value)
        except ValueError:
            raise DescriptorError(f"value {value!r} not in domain of {self.name!r}") from None


@dataclass(frozen=True, order=True)
class GranuleDescriptor:
    """Conjunction of ``(attribute index, value)`` terms, one per attribute.

    Terms are kept sorted by attribute index, so two descriptors are equal
    exactly when their term tuples are.
    """

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple(sorted((int(a), v) for a, v in self.terms))
        attrs = [a for a, _ in terms]
        if len(set(attrs)) != len(attrs):
            raise DescriptorError(f"more than one term on the same attribute: {terms}")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def attributes(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.terms)

    def issubset(self, other: GranuleDescriptor) -> bool:
        return set(self.terms) <= set(other.terms)

    def render(self, schema: Sequence[AttributeSchema]) -> str:
        if not self.terms:
            return "⊤"
        return " ∧ ".join(f"⟨{schema[a].name}, {v}⟩" for a, v in self.terms)


@dataclass(frozen=True, eq=False)
class InformationSystem:
    """A universe of objects described by nominal and scaled attributes.

    ``codes[i, j]`` is the position of object ``i``'s value for attribute
    ``j`` inside ``schema[j].domain``.
    """

    objects: tuple
    schema: tuple[AttributeSchema, ...]
    codes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "schema", tuple(self.schema))
        names = [a.name for a in self.schema]
        if len(set(names)) != len(names):
            raise SchemaError(f"attribute names are not unique: {names}")
        if len(set(self.objects)) != len(self.objects):
            raise SchemaError("object identifiers are not unique")
        codes = np.array(self.codes, dtype=np.int32, copy=True).reshape(
            len(self.objects), len(self.schema)
        )
        for j, attr in enumerate(self.schema):
            col = codes[:, j]
            if col.size and (col.min() < 0 or col.max() >= len(attr.domain)):
                raise SchemaError(f"code out of range for attribute {attr.name!r}")
        object.__setattr__(self, "codes", _frozen(codes))

    @classmethod
    def from_rows(
        cls,
        objects: Sequence,
        schema: Sequence[AttributeSchema],
        rows: Iterable[Sequence[Value]],
    ) -> InformationSystem:
        """Build from raw values; nominal attributes with an empty domain get
        the sorted set of observed values."""
        rows = [tuple(r) for r in rows]
        if len(rows) != len(objects):
            raise SchemaError("one row per object is required")
        schema = list(schema)
        if any(len(r) != len(schema) for r in rows):
            raise SchemaError("every object needs a value for every attribute")
        for j, attr in enumerate(schema):
            if attr.kind is Kind.NOMINAL and not attr.domain:
                schema[j] = AttributeSchema.nominal(attr.name, sorted({r[j] for r in rows}))
        try:
            codes = [[a.code(v) for a, v in zip(schema, r)] for r in rows]
        except DescriptorError as exc:
            raise SchemaError(str(exc)) from None
        return cls(tuple(objects), tuple(schema), np.array(codes, dtype=np.int32))

    def __eq__(self, other):
        if not isinstance(other, InformationSystem):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.schema == other.schema
            and np.array_equal(self.codes, other.codes)
        )

    __hash__ = None

    @property
    def size(self) -> int:
        return len(self.objects)

    @property
    def scaled_attributes(self) -> tuple[int, ...]:
        return tuple(j for j, a in enumerate(self.schema) if a.is_scaled)

    def attribute_index(self, name: str) -> int:
        for j, a in enumerate(self.schema):
            if a.name == name:
                return j
        raise DescriptorError(f"unknown attribute {name!r}")

    def value(self, obj: int, attr: int) -> Value:
        return self.schema[attr].domain[self.codes[obj, attr]]

    def descriptor(self, terms: Mapping[str, Value]) -> GranuleDescriptor:
        """Descriptor from ``{attribute name: value}``, validated."""
        d = GranuleDescriptor(tuple((self.attribute_index(k), v) for k, v in terms.items()))
        validate_descriptor(self.schema, d)
        return d

    def names(self, d: GranuleDescriptor) -> tuple[tuple[str, Value], ...]:
        return tuple((self.schema[a].name, v) for a, v in d.terms)


def validate_descriptor(schema: Sequence[AttributeSchema], d: GranuleDescriptor) -> None:
    for a, v in d.terms:
        if not 0 <= a < len(schema):
            raise DescriptorError(f"attribute index {a} out of range")
        schema[a].code(v)


@dataclass(frozen=True, eq=False)
class Granule:
    descriptor: GranuleDescriptor
    extension: np.ndarray

    @property
    def size(self) -> int:
        return int(np.count_nonzero(self.extension))

    @property
    def support(self) -> Fraction:
        n = len(self.extension)
        if n == 0:
            raise UndefinedRatioError("support over an empty universe")
        return Fraction(self.size, n)


def block_of(system: InformationSystem, d: GranuleDescriptor) -> np.ndarray:
    """Objects agreeing with every term of ``d``; the empty descriptor gives
    the whole universe."""
    validate_descriptor(system.schema, d)
    block = np.ones(system.size, dtype=bool)
    for a, v in d.terms:
        block &= system.codes[:, a] == system.schema[a].code(v)
    return _frozen(block)


def support(system: InformationSystem, d: GranuleDescriptor) -> Fraction:
    block = block_of(system, d)
    if system.size == 0:
        raise UndefinedRatioError("support over an empty universe")
    return Fraction(int(np.count_nonzero(block)), system.size)


def granule(system: InformationSystem, d: GranuleDescriptor) -> Granule:
    return Granule(d, block_of(system, d))


def is_positive(schema: Sequence[AttributeSchema], d: GranuleDescriptor) -> bool:
    validate_descriptor(schema, d)
    return all(v == 1 for a, v in d.terms if schema[a].is_scaled)


@dataclass(frozen=True, eq=False)
class BinaryRelation:
    """R ⊆ U × V as a dense boolean matrix.

    Row ``x`` of ``forward`` is R(x); ``backward`` is the transposed view, so
    the two can never disagree.
    """

    forward: np.ndarray

    def __post_init__(self):
        f = np.array(self.forward, dtype=bool, copy=True)
        if f.ndim != 2:
            raise SchemaError("relation matrix must be two-dimensional")
        object.__setattr__(self, "forward", _frozen(f))
        # float copy for exact hit counting through BLAS; counts stay far below 2**53
        object.__setattr__(self, "_weights", _frozen(f.astype(np.float64)))

    @classmethod
    def from_pairs(cls, n_source: int, n_target: int, pairs: Iterable[tuple[int, int]]):
        m = np.zeros((n_source, n_target), dtype=bool)
        pairs = list(pairs)
        if pairs:
            xs, ys = np.array(pairs, dtype=np.int64).T
            if xs.min() < 0 or ys.min() < 0 or xs.max() >= n_source or ys.max() >= n_target:
                raise SchemaError("relation pair out of range")
            m[xs, ys] = True
        return cls(m)

    def __eq__(self, other):
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return np.array_equal(self.forward, other.forward)

    __hash__ = None

    @property
    def backward(self) -> np.ndarray:
        return self.forward.T

    @property
    def source_size(self) -> int:
        return self.forward.shape[0]

    @property
    def target_size(self) -> int:
        return self.forward.shape[1]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.forward))

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(x), int(y)) for x, y in zip(*np.nonzero(self.forward))]

    def hits(self, targets: np.ndarray) -> np.ndarray:
        """|R(x) ∩ Y| for every source x; ``targets`` may be a vector or a
        (|V|, k) stack of sets."""
        return np.rint(self._weights @ np.asarray(targets, dtype=np.float64)).astype(np.int64)


def neighborhood(r: BinaryRelation, x: int) -> np.ndarray:
    if not 0 <= x < r.source_size:
        raise IndexError(f"source index {x} out of range")
    return r.forward[x]


def inverse_neighborhood(r: BinaryRelation, y: int) -> np.ndarray:
    if not 0 <= y < r.target_size:
        raise IndexError(f"target index {y} out of range")
    return _frozen(np.ascontiguousarray(r.forward[:, y]))


def lower_approx_inverse(r: BinaryRelation, targets: np.ndarray, beta) -> np.ndarray:
    """Source objects whose neighborhood covers at least a ``beta`` share of
    ``targets``."""
    beta = as_fraction(beta)
    if not 0 < beta <= 1:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    targets = np.asarray(targets, dtype=bool)
    n = int(np.count_nonzero(targets))
    if n == 0:
        raise UndefinedRatioError("lower approximation of an empty set")
    return _frozen(ratio_at_least(r.hits(targets), n, beta))


@dataclass(frozen=True, eq=False)
class Mmer:
    """Two information systems joined by a relation from the first universe
    to the second."""

    source: InformationSystem
    target: InformationSystem
    relation: BinaryRelation

    def __post_init__(self):
        if (self.relation.source_size, self.relation.target_size) != (
            self.source.size,
            self.target.size,
        ):
            raise SchemaError("relation dimensions do not match the two universes")

    def __eq__(self, other):
        if not isinstance(other, Mmer):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.relation == other.relation
        )

    __hash__ = None


@dataclass(frozen=True)
class Thresholds:
    ms: Fraction
    mt: Fraction
    sc: Fraction
    tc: Fraction = field(default=Fraction(1, 10))

    def __post_init__(self):
        for name in ("ms", "mt", "sc", "tc"):
            v = as_fraction(getattr(self, name))
            if not 0 < v <= 1:
                raise ValueError(f"threshold {name} must lie in (0, 1], got {v}")
            object.__setattr__(self, name, v)

    def replace(self, **changes) -> Thresholds:
        return Thresholds(**{**self.as_dict(), **changes})

    def as_dict(self) -> dict[str, Fraction]:
        return {"ms": self.ms, "mt": self.mt, "sc": self.sc, "tc": self.tc}
