"""Exact matrices over a number field: products, inverses, ranks, kernels and characteristic polynomials.

:class:`FieldMatrix` wraps a sympy ``DomainMatrix``, so every operation is exact over the field of its entries.
"""
import itertools
import logging
from typing import Any
from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import MALFORMED
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import SchemaError
from projendo.exceptions import ShapeMismatchError
from projendo.exceptions import SingularMatrixError
from projendo.fields import FieldElement
from projendo.fields import NumberField

logger = logging.getLogger(__name__)


class FieldMatrix:
    """An immutable dense matrix over a :class:`NumberField`, backed by a sympy :class:`DomainMatrix`.

    Examples:
        >>> swap = FieldMatrix.from_rows(NumberField.rationals(), [[0, 1], [1, 0]])
        >>> (swap @ swap) == FieldMatrix.identity(NumberField.rationals(), 2)
        True

    """

    __slots__ = ("_field", "_matrix", "_key")

    def __init__(self, field: NumberField, matrix: DomainMatrix) -> None:
        """Initialize from a field and a :class:`DomainMatrix` over its domain.

        Args:
            field (NumberField): The field of the entries.
            matrix (DomainMatrix): The underlying matrix; converted to the field's domain if needed.

        """
        self._field = field
        self._matrix = matrix if matrix.domain == field.domain else matrix.convert_to(field.domain)
        self._key: Optional[tuple] = None

    @classmethod
    def from_rows(cls, field: NumberField, rows: Sequence[Sequence[Any]]) -> "FieldMatrix":
        """Build a matrix from rows of integers, rational strings, :class:`FieldElement` or raw domain elements.

        Raises:
            ShapeMismatchError: If the rows are empty or ragged.

        """
        if not rows or not rows[0]:
            message = "A matrix needs at least one row and one column"
            raise ShapeMismatchError(message)
        width = len(rows[0])
        if any(len(row) != width for row in rows):
            raise ShapeMismatchError(SHAPE_MISMATCH("row length", width, [len(row) for row in rows]))
        entries = [[field.convert(entry) for entry in row] for row in rows]
        return cls(field, DomainMatrix(entries, (len(rows), width), field.domain))

    @classmethod
    def identity(cls, field: NumberField, size: int) -> "FieldMatrix":
        """Return the identity matrix of the given size."""
        return cls(field, DomainMatrix.eye(size, field.domain).to_dense())

    @classmethod
    def diagonal(cls, field: NumberField, entries: Sequence[Any]) -> "FieldMatrix":
        """Return the diagonal matrix with the given entries."""
        size = len(entries)
        rows = [[entries[i] if i == j else 0 for j in range(size)] for i in range(size)]
        return cls.from_rows(field, rows)

    @property
    def field(self) -> NumberField:
        """Return the field of the entries."""
        return self._field

    @property
    def domain(self) -> Domain:
        """Return the sympy domain of the entries."""
        return self._field.domain

    @property
    def shape(self) -> Tuple[int, int]:
        """Return (rows, columns)."""
        return self._matrix.shape

    @property
    def is_square(self) -> bool:
        """Return whether the matrix is square."""
        rows, cols = self.shape
        return rows == cols

    @property
    def domain_matrix(self) -> DomainMatrix:
        """Return the underlying :class:`DomainMatrix`."""
        return self._matrix

    def raw_rows(self) -> List[List[Any]]:
        """Return the entries as lists of raw domain elements."""
        return self._matrix.to_list()

    def rows(self) -> List[List[FieldElement]]:
        """Return the entries as lists of :class:`FieldElement`."""
        return [[FieldElement(self._field, value) for value in row] for row in self.raw_rows()]

    def entry(self, i: int, j: int) -> FieldElement:
        """Return the entry in row i and column j."""
        return FieldElement(self._field, self._matrix[i, j].element)

    def _check(self, other: "FieldMatrix") -> None:
        if other._field != self._field:
            raise FieldMismatchError(FIELD_MISMATCH(self._field, other._field))

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ShapeMismatchError(SHAPE_MISMATCH("inner dimension", self.shape[1], other.shape[0]))
        return FieldMatrix(self._field, self._matrix * other._matrix)

    def __add__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(SHAPE_MISMATCH("shape", self.shape, other.shape))
        return FieldMatrix(self._field, self._matrix + other._matrix)

    def __sub__(self, other: "FieldMatrix") -> "FieldMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatchError(SHAPE_MISMATCH("shape", self.shape, other.shape))
        return FieldMatrix(self._field, self._matrix - other._matrix)

    def scale(self, scalar: Any) -> "FieldMatrix":
        """Return the matrix multiplied by a scalar."""
        return FieldMatrix(self._field, self._matrix * self._field.convert(scalar))

    def apply(self, vector: Sequence[Any]) -> List[Any]:
        """Multiply the matrix by a column vector of raw domain elements."""
        rows = self.raw_rows()
        if len(vector) != len(rows[0]):
            raise ShapeMismatchError(SHAPE_MISMATCH("vector length", len(rows[0]), len(vector)))
        zero = self.domain.zero
        return [sum((a * b for a, b in zip(row, vector)), zero) for row in rows]

    def transpose(self) -> "FieldMatrix":
        """Return the transposed matrix."""
        return FieldMatrix(self._field, self._matrix.transpose())

    def det(self) -> FieldElement:
        """Return the determinant of a square matrix."""
        if not self.is_square:
            raise ShapeMismatchError(SHAPE_MISMATCH("shape", "square", self.shape))
        return FieldElement(self._field, self._matrix.det())

    def is_invertible(self) -> bool:
        """Return whether the matrix is square with nonzero determinant."""
        return self.is_square and not self.det().is_zero()

    def inverse(self) -> "FieldMatrix":
        """Return the inverse matrix.

        Raises:
            SingularMatrixError: If the matrix is not square or has zero determinant.

        """
        if not self.is_invertible():
            message = f"The matrix {self} is not invertible"
            raise SingularMatrixError(message)
        return FieldMatrix(self._field, self._matrix.inv())

    def rank(self) -> int:
        """Return the rank, computed by exact row reduction."""
        return self._matrix.rank()

    def nullspace(self) -> List[List[Any]]:
        """Return a basis of the right kernel as lists of raw domain elements."""
        rows, cols = self.shape
        basis = self._matrix.nullspace()
        if basis.shape[0] == 0 or basis.shape[1] != cols:
            return []
        return [row for row in basis.to_list() if any(row)]

    def charpoly(self) -> List[Any]:
        """Return the characteristic polynomial det(lambda*I - A), highest degree first."""
        if not self.is_square:
            raise ShapeMismatchError(SHAPE_MISMATCH("shape", "square", self.shape))
        return self._matrix.charpoly()

    def key(self) -> tuple:
        """Return a hashable canonical key made of the rational coordinates of the entries."""
        if self._key is None:
            self._key = tuple(tuple(self._field.coords_of(v) for v in row) for row in self.raw_rows())
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self._field == other._field and self.shape == other.shape and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(e) for e in row) + "]" for row in self.rows()) + "]"

    def __repr__(self) -> str:
        return f"FieldMatrix({self})"

    def to_json(self) -> dict:
        """Serialize as ``{"field": [...], "rows": [[<FieldElement>...]...]}``."""
        return {"field": self._field.to_json(), "rows": [[e.to_json() for e in row] for row in self.rows()]}

    @staticmethod
    def from_json(data: Any, field: Optional[NumberField] = None) -> "FieldMatrix":
        """Parse a matrix from a list of rows, or from ``{"field": [...], "rows": [...]}``.

        Entries are field element objects or bare rationals.

        Raises:
            SchemaError: If the data does not describe a matrix.

        """
        if isinstance(data, dict):
            if "rows" not in data:
                raise SchemaError(MALFORMED("matrix", "missing 'rows'"))
            if "field" in data:
                parsed = NumberField.from_json(data["field"])
                if field is not None and parsed != field:
                    raise FieldMismatchError(FIELD_MISMATCH(field, parsed))
                field = parsed
            data = data["rows"]
        if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
            raise SchemaError(MALFORMED("matrix", "expected a nonempty list of rows"))
        if field is None:
            field = _infer_field(data)
        rows = [[FieldElement.from_json(entry, field) for entry in row] for row in data]
        return FieldMatrix.from_rows(field, rows)


def _infer_field(rows: List[list]) -> NumberField:
    for row in rows:
        for entry in row:
            if isinstance(entry, dict) and "field" in entry:
                return NumberField.from_json(entry["field"])
    return NumberField.rationals()


def independent_subset(vectors: Sequence[Sequence[Any]], domain: Domain) -> List[int]:
    """Return the indices of a maximal linearly independent subset, chosen greedily in the given order.

    Args:
        vectors (Sequence[Sequence[Any]]): Equal-length vectors of raw domain elements.
        domain (Domain): The field of the entries.

    Returns:
        List[int]: The indices of the chosen vectors, increasing.

    """
    if not vectors:
        return []
    length = len(vectors[0])
    columns = DomainMatrix([list(v) for v in vectors], (len(vectors), length), domain).transpose()
    _, pivots = columns.rref()
    return list(pivots)


def rank_of_rows(rows: Sequence[Sequence[Any]], num_cols: int, domain: Domain) -> int:
    """Return the rank of a matrix given by rows of raw domain elements over any sympy domain."""
    if not rows:
        return 0
    return DomainMatrix([list(row) for row in rows], (len(rows), num_cols), domain).rank()


def integer_combinations(
    size: int, max_height: Optional[int] = None
) -> Iterator[List[Tuple[Tuple[int, ...], Tuple[int, ...]]]]:
    """Yield small integer coefficient vectors of the given length, in blocks.

    Vectors come by increasing height (largest absolute entry), then by increasing support size; one block holds
    the vectors of one height and one support, as ``(support, values)`` pairs. The first nonzero value is always
    positive, so no vector is the negative of another. Without ``max_height`` the enumeration never ends.
    """
    heights = itertools.count(1) if max_height is None else range(1, max_height + 1)
    for height in heights:
        values = [v for v in range(-height, height + 1) if v]
        for support_size in range(1, size + 1):
            for support in itertools.combinations(range(size), support_size):
                block = [
                    (support, assignment)
                    for assignment in itertools.product(values, repeat=support_size)
                    if assignment[0] > 0 and max(abs(v) for v in assignment) == height
                ]
                yield block
