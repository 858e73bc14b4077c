"""Twisted power sets, splitting automorphisms, and exact density surveys
on small finite groups."""

from .automorphisms import (
    Automorphism,
    AutomorphismSet,
    automorphism_group,
    automorphisms_of_order_dividing,
    conjugation_automorphism,
    fallback_automorphisms,
    identity_automorphism,
    induced_quotient_automorphism,
    inversion_automorphism,
    is_automorphism,
)
from .catalog import (
    CatalogEntry,
    Fingerprint,
    GroupSpec,
    catalog_hash,
    enumerate_catalog,
    export_group,
    fingerprint,
    generate_family,
    import_group,
    parse_spec,
)
from .constructions import (
    SemidirectProduct,
    check_coset_density,
    check_full_quotient_family,
    check_large_intersection,
    coset_density_trials,
    large_intersection_trials,
    semidirect_with_cyclic,
    verify_coset_relation,
    verify_quotient_monotonicity,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    build_from_permutation_generators,
    build_from_table,
)
from .splitting import (
    SolutionSet,
    check_index_bound,
    format_fraction,
    hughes_thompson_subgroup,
    power_solution_set,
    twisted_solution_set,
)
from .survey import (
    FrontierRecord,
    survey_c_n,
    verify_splitting_structure,
    verify_threshold_theorem,
)

__version__ = "0.1.0"

__all__ = [
    "Automorphism", "AutomorphismSet", "CatalogEntry", "FiniteGroup",
    "Fingerprint", "FrontierRecord", "GroupSpec", "SemidirectProduct",
    "SolutionSet", "Subgroup",
    "automorphism_group", "automorphisms_of_order_dividing",
    "build_from_permutation_generators", "build_from_table", "catalog_hash",
    "check_coset_density", "check_full_quotient_family",
    "check_index_bound", "check_large_intersection",
    "conjugation_automorphism", "coset_density_trials", "enumerate_catalog",
    "export_group", "fallback_automorphisms", "fingerprint", "format_fraction",
    "generate_family", "hughes_thompson_subgroup", "identity_automorphism",
    "import_group", "induced_quotient_automorphism", "inversion_automorphism",
    "is_automorphism", "large_intersection_trials", "parse_spec",
    "power_solution_set", "semidirect_with_cyclic", "survey_c_n",
    "twisted_solution_set", "verify_coset_relation",
    "verify_quotient_monotonicity", "verify_splitting_structure",
    "verify_threshold_theorem",
]
