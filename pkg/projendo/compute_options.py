from dataclasses import dataclass
from datetime import timedelta
from typing import Optional

from projendo.constants import CERTIFICATE_PRIME_BITS
from projendo.constants import CERTIFICATE_PRIMES
from projendo.constants import DEFAULT_ENUMERATION_CAP
from projendo.constants import DEFAULT_SEARCH_BUDGET
from projendo.constants import MACAULAY_MAX_DEGREE
from projendo.constants import MACAULAY_MAX_DIM
from projendo.constants import SPECIALIZATION_GRID_BOUND
from projendo.constants import SYMBOLIC_PARAMETER_CAP
from projendo.constants import WITNESS_SEARCH_BOUND
from projendo.exceptions import InvalidParameterError
from projendo.exceptions import OUT_OF_RANGE


@dataclass
class ComputeOptions:
    """Class to represent the tunable limits of the exact computations.

    Examples:
        >>> options = ComputeOptions(enumeration_cap=500, search_budget=50)
        >>> group = enumerate_group(generators, options=options)

    Attributes:
        enumeration_cap (int): (Optional) The maximum order of an enumerated matrix group. Defaults to 10000.
        search_budget (int): (Optional) The number of candidate invariants tried before a smooth invariant search
            gives up. Defaults to 200.
        macaulay_max_dim (int): (Optional) The largest projective dimension handled by the exact Macaulay rank.
            Defaults to 3.
        macaulay_max_degree (int): (Optional) The largest degree handled by the exact Macaulay rank. Defaults to 6.
        certificate_primes (int): (Optional) The number of primes tried by the modular certificate. Defaults to 3.
        prime_bits (int): (Optional) The bit size of those primes. Defaults to 62.
        witness_search_bound (int): (Optional) The coordinate bound of the common-zero witness search.
            Defaults to 2.
        specialization_bound (int): (Optional) The integer range used to specialize eigenspace parameters.
            Defaults to 2.
        symbolic_parameter_cap (int): (Optional) The largest eigenspace dimension whose regularity verdict is
            decided symbolically. Defaults to 10.
        max_parallel_workers (Optional[int]): (Optional) The number of worker threads used by parallel evaluation,
            with a default of 4. For the executor default, this can be set to None.
        parallel_timeout (Optional[timedelta]): (Optional) The time limit of a parallel evaluation. Defaults to no
            timeout.

    """

    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    search_budget: int = DEFAULT_SEARCH_BUDGET
    macaulay_max_dim: int = MACAULAY_MAX_DIM
    macaulay_max_degree: int = MACAULAY_MAX_DEGREE
    certificate_primes: int = CERTIFICATE_PRIMES
    prime_bits: int = CERTIFICATE_PRIME_BITS
    witness_search_bound: int = WITNESS_SEARCH_BOUND
    specialization_bound: int = SPECIALIZATION_GRID_BOUND
    symbolic_parameter_cap: int = SYMBOLIC_PARAMETER_CAP
    max_parallel_workers: Optional[int] = 4
    parallel_timeout: Optional[timedelta] = None

    def __post_init__(self) -> None:
        for name, lower in (
            ("enumeration_cap", 1),
            ("search_budget", 0),
            ("macaulay_max_dim", 1),
            ("macaulay_max_degree", 1),
            ("certificate_primes", 1),
            ("prime_bits", 3),
            ("witness_search_bound", 0),
            ("specialization_bound", 0),
            ("symbolic_parameter_cap", 0),
        ):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < lower:
                raise InvalidParameterError(OUT_OF_RANGE(name, value, lower, None))
        if self.max_parallel_workers is not None and self.max_parallel_workers < 1:
            raise InvalidParameterError(OUT_OF_RANGE("max_parallel_workers", self.max_parallel_workers, 1, None))
        if self.parallel_timeout is not None and self.parallel_timeout <= timedelta(0):
            message = f"parallel_timeout must be positive, given {self.parallel_timeout}"
            raise InvalidParameterError(message)
