from typing import Final

DEFAULT_SEED: Final[int] = 0
"""int: The seed used by every randomized operation when none is given, currently set to 0."""

DEFAULT_ENUMERATION_CAP: Final[int] = 10000
"""int: The default maximum order accepted by :func:`enumerate_group`, currently set to 10000."""
DEFAULT_SEARCH_BUDGET: Final[int] = 200
"""int: The default number of candidates tried by :func:`smooth_invariant_search`, currently set to 200."""

IRREDUCIBILITY_VERIFICATION_DEGREE: Final[int] = 4
"""int: Minimal polynomials up to this degree are verified irreducible over the rationals."""

MACAULAY_MAX_DIM: Final[int] = 3
"""int: The largest projective dimension r for which regularity is decided by an exact Macaulay rank."""
MACAULAY_MAX_DEGREE: Final[int] = 6
"""int: The largest component degree for which regularity is decided by an exact Macaulay rank."""

CERTIFICATE_PRIMES: Final[int] = 3
"""int: The number of independent primes tried by the modular regularity certificate."""
CERTIFICATE_PRIME_BITS: Final[int] = 62
"""int: The bit size of the primes used by the modular regularity certificate."""

WITNESS_SEARCH_BOUND: Final[int] = 2
"""int: The largest absolute value of a coordinate tried by the common-zero witness search."""

ORACLE_GUARD: Final[int] = 10**7
"""int: The maximum number of tuples :func:`brute_force_homs` is allowed to enumerate."""

SPECIALIZATION_GRID_BOUND: Final[int] = 2
"""int: Eigenspace parameters are specialized to integers in ``[-bound, bound]`` before a symbolic decision."""
SYMBOLIC_PARAMETER_CAP: Final[int] = 10
"""int: The largest eigenspace dimension for which a regularity verdict is decided symbolically."""

VARIABLE_PREFIX: Final[str] = "x"
"""str: The prefix of the polynomial ring generators, which are named ``x0, x1, ...``."""

LOG_LEVEL_ENV_VAR: Final[str] = "PROJENDO_LOG_LEVEL"
"""str: The environment variable read by the command line interface to pick a log level."""
