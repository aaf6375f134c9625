"""Zero intervals of subsets of association schemes and spherical designs.

Exact (rational) computation of inner and dual distributions, outer
distributions and complete regularity, restricted idempotents and induced
Q-polynomial schemes, and Gegenbauer moments of point sets on the sphere.
"""
from .distributions import analyze_subset, dual_distribution, inner_distribution
from .errors import DelsarteError, ImplementationFault, InputError
from .named import HammingScheme, JohnsonScheme, build_named
from .scheme import AssociationScheme, ExplicitScheme, verify_scheme

__version__ = "0.1.0"

__all__ = [
    "AssociationScheme",
    "DelsarteError",
    "ExplicitScheme",
    "HammingScheme",
    "ImplementationFault",
    "InputError",
    "JohnsonScheme",
    "analyze_subset",
    "build_named",
    "dual_distribution",
    "inner_distribution",
    "verify_scheme",
    "__version__",
]
