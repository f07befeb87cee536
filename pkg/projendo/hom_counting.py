"""Counting homomorphisms from the fundamental group of a genus-g surface into a finite group.

The count is ``#G * sum_r (#G / dim r)^(2g - 2)`` over the irreducible representations r of G. An exhaustive
enumeration over permutation realizations of the groups serves as an independent check.
"""
import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Any
from typing import List
from typing import Optional
from typing import Tuple

from sympy import QQ
from sympy.combinatorics import AlternatingGroup
from sympy.combinatorics import CyclicGroup
from sympy.combinatorics import DihedralGroup
from sympy.combinatorics import PermutationGroup
from sympy.combinatorics import SymmetricGroup

from projendo.compute_options import ComputeOptions
from projendo.constants import ORACLE_GUARD
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import OUT_OF_RANGE
from projendo.exceptions import OracleGuardError
from projendo.fields import BigRational
from projendo.parallel import run_parallel

logger = logging.getLogger(__name__)


class GroupFamily(str, Enum):
    """The finite subgroups of PU(2) that come with built-in data."""

    CYCLIC = "cyclic"
    DIHEDRAL = "dihedral"
    A4 = "A4"
    S4 = "S4"
    A5 = "A5"


_ALIAS = re.compile(r"^(?P<family>[CD])(?P<n>\d+)$")


def parse_family(family: str, n: Optional[int] = None) -> Tuple[GroupFamily, Optional[int]]:
    """Resolve a family name and its parameter, accepting the aliases ``S3``, ``C<n>`` and ``D<n>``.

    Raises:
        InvalidParameterError: If the family is unknown, or the parameter is missing or out of range.

    """
    if family == "S3":
        family, n = GroupFamily.DIHEDRAL.value, 3
    match = _ALIAS.match(family)
    if match:
        family = GroupFamily.CYCLIC.value if match.group("family") == "C" else GroupFamily.DIHEDRAL.value
        n = int(match.group("n"))
    try:
        resolved = GroupFamily(family)
    except ValueError:
        names = ", ".join(f.value for f in GroupFamily)
        message = f"Unknown group family {family!r}; expected one of {names}, S3, C<n> or D<n>"
        raise InvalidParameterError(message) from None
    if resolved == GroupFamily.CYCLIC:
        if n is None or n < 1:
            raise InvalidParameterError(OUT_OF_RANGE("n", n, 1, None))
    elif resolved == GroupFamily.DIHEDRAL:
        if n is None or n < 3:
            raise InvalidParameterError(OUT_OF_RANGE("n", n, 3, None))
    else:
        n = None
    return resolved, n


@dataclass(frozen=True)
class GroupRepData:
    """The order of a finite group and the degrees of its irreducible representations.

    Attributes:
        name (str): A label such as ``"dihedral-5"``.
        order (int): The group order #G.
        irrep_degrees (Tuple[int, ...]): The degree of every irreducible representation.

    Raises:
        InvalidParameterError: If the squares of the degrees do not add up to the order.

    """

    name: str
    order: int
    irrep_degrees: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(d < 1 for d in self.irrep_degrees) or sum(d * d for d in self.irrep_degrees) != self.order:
            degrees = list(self.irrep_degrees)
            message = f"Representation degrees {degrees} violate sum(d^2) = {self.order} for {self.name}"
            raise InvalidParameterError(message)

    def to_json(self) -> dict:
        """Serialize the data."""
        return {"name": self.name, "order": self.order, "irrep_degrees": list(self.irrep_degrees)}


def builtin_group_data(family: str, n: Optional[int] = None) -> GroupRepData:
    """Return the order and irreducible degrees of a built-in group.

    The dihedral group of the n-gon has order 2n.

    Examples:
        >>> builtin_group_data("S4").irrep_degrees
        (1, 1, 2, 3, 3)

    """
    resolved, n = parse_family(family, n)
    if resolved == GroupFamily.CYCLIC:
        return GroupRepData(f"cyclic-{n}", n, (1,) * n)
    if resolved == GroupFamily.DIHEDRAL:
        if n % 2:
            degrees = (1, 1) + (2,) * ((n - 1) // 2)
        else:
            degrees = (1, 1, 1, 1) + (2,) * ((n - 2) // 2)
        return GroupRepData(f"dihedral-{n}", 2 * n, degrees)
    if resolved == GroupFamily.A4:
        return GroupRepData("A4", 12, (1, 1, 1, 3))
    if resolved == GroupFamily.S4:
        return GroupRepData("S4", 24, (1, 1, 2, 3, 3))
    return GroupRepData("A5", 60, (1, 3, 3, 4, 5))


def formula_terms(G: GroupRepData, genus: int) -> List[Tuple[int, BigRational]]:
    """Return ``(d, (#G/d)^(2g-2))`` for every irreducible degree d."""
    if genus < 0:
        raise InvalidParameterError(OUT_OF_RANGE("genus", genus, 0, None))
    return [(d, QQ(G.order, d) ** (2 * genus - 2)) for d in G.irrep_degrees]


def count_homs(G: GroupRepData, genus: int) -> BigRational:
    """Return the number of homomorphisms from the genus-g surface group to G, as an exact rational.

    The value is an integer for every genus; for genus 0 it is 1.

    Raises:
        InvalidParameterError: If the genus is negative.

    """
    total = sum((term for _, term in formula_terms(G, genus)), QQ.zero)
    return QQ(G.order) * total


@dataclass(frozen=True)
class PermGroup:
    """A permutation group together with the exhaustive list of its elements.

    Attributes:
        name (str): A label of the group.
        group (PermutationGroup): The sympy permutation group.
        elements (Tuple[Any, ...]): Every element, identity first.

    """

    name: str
    group: PermutationGroup
    elements: Tuple[Any, ...]

    @property
    def order(self) -> int:
        """Return the number of elements."""
        return len(self.elements)

    @property
    def degree(self) -> int:
        """Return the number of permuted points."""
        return self.group.degree


def builtin_perm_group(family: str, n: Optional[int] = None) -> PermGroup:
    """Realize a built-in group by permutations: C_n as an n-cycle, the dihedral group on the n-gon, A4 and S4 on
    four letters and A5 on five.
    """
    resolved, n = parse_family(family, n)
    if resolved == GroupFamily.CYCLIC:
        group, name = CyclicGroup(n), f"cyclic-{n}"
    elif resolved == GroupFamily.DIHEDRAL:
        group, name = DihedralGroup(n), f"dihedral-{n}"
    elif resolved == GroupFamily.A4:
        group, name = AlternatingGroup(4), "A4"
    elif resolved == GroupFamily.S4:
        group, name = SymmetricGroup(4), "S4"
    else:
        group, name = AlternatingGroup(5), "A5"
    identity = group.identity
    elements = [identity] + [p for p in group.generate() if p != identity]
    return PermGroup(name, group, tuple(elements))


def conjugacy_class_count(G: PermGroup) -> int:
    """Return the number of conjugacy classes, which equals the number of irreducible representations."""
    return len(G.group.conjugacy_classes())


def _tables(G: PermGroup) -> Tuple[List[List[int]], List[int]]:
    index = {tuple(p.array_form): i for i, p in enumerate(G.elements)}
    multiplication = [[index[tuple((p * q).array_form)] for q in G.elements] for p in G.elements]
    inverse = [index[tuple((~p).array_form)] for p in G.elements]
    return multiplication, inverse


def _count_with_first(first: int, multiplication: List[List[int]], inverse: List[int], genus: int) -> int:
    """Count the tuples (a1, b1, ..., ag, bg) with a1 fixed whose product of commutators is the identity."""
    size = len(inverse)

    def commutator(a: int, b: int) -> int:
        return multiplication[multiplication[multiplication[a][b]][inverse[a]]][inverse[b]]

    count = 0
    for rest in itertools.product(range(size), repeat=2 * genus - 1):
        letters = (first,) + rest
        product = 0
        for i in range(genus):
            product = multiplication[product][commutator(letters[2 * i], letters[2 * i + 1])]
        if product == 0:
            count += 1
    return count


def brute_force_homs(G: PermGroup, genus: int, options: Optional[ComputeOptions] = None) -> int:
    """Count the tuples in G^(2g) whose product of commutators [a_i, b_i] = a_i b_i a_i^-1 b_i^-1 is the identity.

    The enumeration is split by the first letter across parallel tasks.

    Raises:
        InvalidParameterError: If the genus is below 1.
        OracleGuardError: If |G|^(2g) exceeds the enumeration guard.

    """
    options = options or ComputeOptions()
    if genus < 1:
        raise InvalidParameterError(OUT_OF_RANGE("genus", genus, 1, None))
    tuples = G.order ** (2 * genus)
    if tuples > ORACLE_GUARD:
        message = f"Enumerating {tuples} tuples of {G.name} exceeds the guard of {ORACLE_GUARD}"
        raise OracleGuardError(message)
    multiplication, inverse = _tables(G)
    logger.debug("enumerating %d tuples of %s for genus %d", tuples, G.name, genus)
    partial_counts = run_parallel(
        _count_with_first,
        [(first, multiplication, inverse, genus) for first in range(G.order)],
        timeout=options.parallel_timeout,
        max_workers=options.max_parallel_workers,
    )
    if any(count is None for count in partial_counts):
        message = f"The enumeration for {G.name} did not finish within {options.parallel_timeout}"
        raise OracleGuardError(message)
    return sum(partial_counts)
