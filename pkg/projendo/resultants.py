"""Resultant-style tests for common projective zeros of a tuple of forms.

Two binary forms are tested with their Sylvester determinant. A square system of r+1 forms in r+1 variables with
degrees d_i has no common projective zero exactly when its Macaulay matrix in degree D = sum(d_i - 1) + 1 (rows:
the products x^a * f_i of degree D; columns: the degree-D monomials) has full column rank. The rank is computed
exactly for small systems and modulo large primes otherwise; a full rank modulo p implies a full rank over the
rationals, so the modular route can only ever prove regularity.
"""
import functools
import itertools
import logging
import math
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum
from typing import Any
from typing import Dict
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Tuple

from sympy.ntheory import prevprime
from sympy.polys.domains import GF
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from projendo.compute_options import ComputeOptions
from projendo.exceptions import FIELD_MISMATCH
from projendo.exceptions import FieldMismatchError
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import InvalidParameterMessage
from projendo.exceptions import SHAPE_MISMATCH
from projendo.exceptions import ShapeMismatchError
from projendo.fields import FieldElement
from projendo.forms import Form
from projendo.forms import monomials
from projendo.linear_algebra import FieldMatrix
from projendo.parallel import run_parallel

logger = logging.getLogger(__name__)

TermDict = Mapping[Tuple[int, ...], Any]


class Regularity(str, Enum):
    """Whether the components of a map have a common projective zero."""

    CERTIFIED_REGULAR = "certified-regular"
    CERTIFIED_IRREGULAR = "certified-irregular"
    UNCHECKED = "unchecked"


class CertificateMethod(str, Enum):
    """The procedure that decided a :class:`RegularityCertificate`."""

    CONSTANT = "constant"
    SYLVESTER = "sylvester"
    MACAULAY = "macaulay"
    MODULAR = "modular"
    WITNESS = "witness"
    NONE = "none"


@dataclass(frozen=True)
class RegularityCertificate:
    """The outcome of :func:`certify_components`.

    Attributes:
        regularity (Regularity): The verdict.
        method (CertificateMethod): The procedure that reached it.
        witness (Optional[Tuple[FieldElement, ...]]): A common zero, when one was found by search.
        primes (Tuple[int, ...]): The primes tried by the modular certificate.

    """

    regularity: Regularity
    method: CertificateMethod
    witness: Optional[Tuple[FieldElement, ...]] = None
    primes: Tuple[int, ...] = dataclass_field(default_factory=tuple)

    def to_json(self) -> dict:
        """Serialize the certificate."""
        result = {"regularity": self.regularity.value, "method": self.method.value}
        if self.witness is not None:
            result["witness"] = [c.to_json() for c in self.witness]
        if self.primes:
            result["primes"] = list(self.primes)
        return result


def binary_coefficients(terms: TermDict, degree: int, zero: Any) -> List[Any]:
    """Return the full coefficient list of a binary form, highest power of x0 first."""
    return [terms.get((degree - i, i), zero) for i in range(degree + 1)]


def sylvester_rows(f_coeffs: Sequence[Any], g_coeffs: Sequence[Any], zero: Any) -> List[List[Any]]:
    """Return the rows of the Sylvester matrix of two full coefficient lists.

    The coefficient list of f (degree p) is shifted q times and the one of g (degree q) is shifted p times.
    """
    p = len(f_coeffs) - 1
    q = len(g_coeffs) - 1
    size = p + q
    rows = []
    for shift in range(q):
        rows.append([zero] * shift + list(f_coeffs) + [zero] * (size - shift - p - 1))
    for shift in range(p):
        rows.append([zero] * shift + list(g_coeffs) + [zero] * (size - shift - q - 1))
    return rows


def sylvester_determinant(f_coeffs: Sequence[Any], g_coeffs: Sequence[Any], domain: Domain) -> Any:
    """Return the Sylvester determinant of two full coefficient lists over any sympy integral domain."""
    size = len(f_coeffs) + len(g_coeffs) - 2
    if size == 0:
        return domain.one
    rows = sylvester_rows(f_coeffs, g_coeffs, domain.zero)
    return DomainMatrix(rows, (size, size), domain).det()


def _check_binary(*forms: Form) -> None:
    for f in forms:
        if f.num_vars != 2:
            raise InvalidParameterError(InvalidParameterMessage.NON_BINARY.value)
    for f in forms[1:]:
        if f.field != forms[0].field:
            raise FieldMismatchError(FIELD_MISMATCH(forms[0].field, f.field))


def sylvester_matrix(f: Form, g: Form) -> FieldMatrix:
    """Return the (p+q) x (p+q) Sylvester matrix of two binary forms of degrees p and q, p + q >= 1.

    Raises:
        InvalidParameterError: If a form is not binary.
        ShapeMismatchError: If both forms are constants.

    """
    _check_binary(f, g)
    if f.degree + g.degree == 0:
        message = "The Sylvester matrix of two constants is empty"
        raise ShapeMismatchError(message)
    zero = f.field.domain.zero
    rows = sylvester_rows(
        binary_coefficients(f.raw_terms(), f.degree, zero), binary_coefficients(g.raw_terms(), g.degree, zero), zero
    )
    return FieldMatrix.from_rows(f.field, rows)


def sylvester_resultant(f: Form, g: Form) -> FieldElement:
    """Return the resultant of two binary forms, zero iff they share a projective root over the algebraic closure.

    The full coefficient lists are used, so a common root at (1:0) (both leading x0-coefficients vanishing) is
    detected as well.

    Args:
        f (Form): A binary form of degree p.
        g (Form): A binary form of degree q.

    Returns:
        FieldElement: The determinant of the Sylvester matrix (1 when p = q = 0).

    Raises:
        InvalidParameterError: If a form is not binary.

    Examples:
        >>> QQ = NumberField.rationals()
        >>> sylvester_resultant(Form.monomial(QQ, (2, 0)), Form.monomial(QQ, (0, 2))) == 1
        True

    """
    _check_binary(f, g)
    domain = f.field.domain
    value = sylvester_determinant(
        binary_coefficients(f.raw_terms(), f.degree, domain.zero),
        binary_coefficients(g.raw_terms(), g.degree, domain.zero),
        domain,
    )
    return FieldElement(f.field, value)


def macaulay_degree(degrees: Sequence[int]) -> int:
    """Return sum(d_i - 1) + 1, the degree of the Macaulay matrix."""
    return sum(d - 1 for d in degrees) + 1


def macaulay_rows(
    term_dicts: Sequence[TermDict], degrees: Sequence[int], num_vars: int
) -> Tuple[List[Dict[int, Any]], int]:
    """Return the sparse rows of the Macaulay matrix and its number of columns.

    Args:
        term_dicts (Sequence[TermDict]): The terms of each form, exponent vector to coefficient.
        degrees (Sequence[int]): The degree of each form.
        num_vars (int): The number of variables.

    Returns:
        Tuple[List[Dict[int, Any]], int]: One ``{column: coefficient}`` dict per nonzero row, and the column count.

    """
    top = macaulay_degree(degrees)
    columns = {monom: j for j, monom in enumerate(monomials(num_vars, top))}
    rows = []
    for terms, degree in zip(term_dicts, degrees):
        if not terms:
            continue
        for multiplier in monomials(num_vars, top - degree):
            row = {}
            for monom, coeff in terms.items():
                shifted = tuple(a + b for a, b in zip(monom, multiplier))
                row[columns[shifted]] = coeff
            rows.append(row)
    return rows, len(columns)


def macaulay_full_rank(term_dicts: Sequence[TermDict], degrees: Sequence[int], num_vars: int, domain: Domain) -> bool:
    """Return whether the Macaulay matrix has full column rank over ``domain`` (or its fraction field)."""
    rows, num_cols = macaulay_rows(term_dicts, degrees, num_vars)
    if len(rows) < num_cols:
        return False
    matrix = DomainMatrix({i: row for i, row in enumerate(rows)}, (len(rows), num_cols), domain)
    return matrix.rank() == num_cols


def _integer_terms(terms: TermDict) -> Dict[Tuple[int, ...], int]:
    multiplier = 1
    for coeff in terms.values():
        multiplier = multiplier * int(coeff.denominator) // math.gcd(multiplier, int(coeff.denominator))
    return {monom: int(coeff.numerator) * (multiplier // int(coeff.denominator)) for monom, coeff in terms.items()}


def modular_full_rank(
    integer_term_dicts: Sequence[Mapping[Tuple[int, ...], int]], degrees: Sequence[int], num_vars: int, prime: int
) -> bool:
    """Return whether the Macaulay matrix of integer forms has full column rank modulo ``prime``."""
    finite_field = GF(prime)
    reduced = [
        {monom: finite_field(c % prime) for monom, c in terms.items() if c % prime} for terms in integer_term_dicts
    ]
    return macaulay_full_rank(reduced, degrees, num_vars, finite_field)


def certificate_primes(count: int, bits: int) -> List[int]:
    """Return ``count`` distinct primes just below 2**bits, largest first."""
    primes = []
    bound = 2**bits
    for _ in range(count):
        bound = prevprime(bound)
        primes.append(bound)
    return primes


def common_zero_witness(components: Sequence[Form], bound: int) -> Optional[Tuple[FieldElement, ...]]:
    """Search for a common zero among the primitive integer points of height at most ``bound``.

    Points are normalized to have their first nonzero coordinate positive, so each projective point is tried once.

    Returns:
        Optional[Tuple[FieldElement, ...]]: The first common zero found, or None.

    """
    first = components[0]
    domain = first.field.domain
    for point in itertools.product(range(-bound, bound + 1), repeat=first.num_vars):
        leading = next((c for c in point if c), 0)
        if leading <= 0 or functools.reduce(math.gcd, point) != 1:
            continue
        values = [domain.convert(c) for c in point]
        if all(not _evaluate_terms(f.raw_terms(), values, domain) for f in components):
            logger.debug("common zero %s found by search", point)
            return tuple(first.field(c) for c in point)
    return None


def _evaluate_terms(terms: TermDict, values: Sequence[Any], domain: Domain) -> Any:
    total = domain.zero
    for monom, coeff in terms.items():
        term = coeff
        for value, exponent in zip(values, monom):
            if exponent:
                term = term * value**exponent
        total += term
    return total


def certify_components(components: Sequence[Form], options: Optional[ComputeOptions] = None) -> RegularityCertificate:
    """Decide whether r+1 forms in r+1 variables have a common projective zero.

    r = 1 uses the Sylvester resultant. Systems with r and the degrees within the Macaulay limits of ``options``
    use the exact Macaulay rank. Larger rational systems use the Macaulay rank modulo several large primes in
    parallel, falling back to a common-zero search when every prime is inconclusive; larger systems over a proper
    number field use the exact rank.

    Args:
        components (Sequence[Form]): The forms, all in the same number of variables and over the same field.
        options (Optional[ComputeOptions]): (Optional) The limits of the procedures.

    Returns:
        RegularityCertificate: The verdict and how it was reached.

    Raises:
        ShapeMismatchError: If the number of forms differs from the number of variables.

    """
    options = options or ComputeOptions()
    if not components:
        raise ShapeMismatchError(InvalidParameterMessage.EMPTY_COMPONENTS.value)
    num_vars = components[0].num_vars
    for f in components:
        if f.num_vars != num_vars:
            raise ShapeMismatchError(SHAPE_MISMATCH("num_vars", num_vars, f.num_vars))
        if f.field != components[0].field:
            raise FieldMismatchError(FIELD_MISMATCH(components[0].field, f.field))
    if len(components) != num_vars:
        raise ShapeMismatchError(SHAPE_MISMATCH("number of components", num_vars, len(components)))

    if any(f.degree == 0 and not f.is_zero() for f in components):
        return RegularityCertificate(Regularity.CERTIFIED_REGULAR, CertificateMethod.CONSTANT)
    if any(f.is_zero() for f in components):
        return RegularityCertificate(Regularity.CERTIFIED_IRREGULAR, CertificateMethod.CONSTANT)

    field = components[0].field
    r = num_vars - 1
    if r == 1:
        regular = not sylvester_resultant(components[0], components[1]).is_zero()
        return RegularityCertificate(_verdict(regular), CertificateMethod.SYLVESTER)

    term_dicts = [f.raw_terms() for f in components]
    degrees = [f.degree for f in components]
    small = r <= options.macaulay_max_dim and max(degrees) <= options.macaulay_max_degree
    if small or not field.is_rational:
        if not small:
            logger.warning("modular certificate needs rational coefficients; using the exact rank over %s", field)
        logger.debug("Macaulay rank in degree %d for %d forms", macaulay_degree(degrees), len(components))
        regular = macaulay_full_rank(term_dicts, degrees, num_vars, field.domain)
        return RegularityCertificate(_verdict(regular), CertificateMethod.MACAULAY)

    primes = certificate_primes(options.certificate_primes, options.prime_bits)
    integer_dicts = [_integer_terms(terms) for terms in term_dicts]
    logger.debug("modular Macaulay rank modulo %s", primes)
    full_ranks = run_parallel(
        modular_full_rank,
        [(integer_dicts, degrees, num_vars, p) for p in primes],
        timeout=options.parallel_timeout,
        max_workers=options.max_parallel_workers,
    )
    if any(full_ranks):
        return RegularityCertificate(Regularity.CERTIFIED_REGULAR, CertificateMethod.MODULAR, primes=tuple(primes))

    witness = common_zero_witness(components, options.witness_search_bound)
    if witness is not None:
        return RegularityCertificate(
            Regularity.CERTIFIED_IRREGULAR, CertificateMethod.WITNESS, witness=witness, primes=tuple(primes)
        )
    logger.info("regularity undecided: rank deficient modulo %s and no small common zero", primes)
    return RegularityCertificate(Regularity.UNCHECKED, CertificateMethod.NONE, primes=tuple(primes))


def _verdict(regular: bool) -> Regularity:
    return Regularity.CERTIFIED_REGULAR if regular else Regularity.CERTIFIED_IRREGULAR
