"""Numerical toolkit for non-autonomous discrete dynamical systems on the
interval and the circle, their hyperspace and fuzzy extensions."""

__version__ = "0.1.0"

from .spaces import (  # noqa: E402
    CIRCLE,
    INTERVAL,
    IntervalUnion,
    NdsSpec,
    PLMap,
    autonomous,
    build_fm,
    build_rotation_sequence,
    build_transitive_zero_entropy,
    identity,
    rotation,
    tent,
)
from .hyperspace import Arc, FiniteCompact, hausdorff, induced_image, phi, psi  # noqa: E402
from .fuzzy import PCFuzzy, chi, d_endograph, d_infty, level_set, zadeh_extend  # noqa: E402
from .systems import (  # noqa: E402
    arcs_system,
    base_system,
    fuzzy_system,
    hyper_system,
    power_system,
    product_system,
)
from .entropy import entropy_estimate, lap_count_entropy, separated_count, spanning_count  # noqa: E402
from .chains import check_chain_property, find_chain, is_pseudo_orbit  # noqa: E402
from .shadowing import decide_finite_shadowing, decide_h_shadowing, estimate_shadowing_modulus  # noqa: E402
from .sensitivity import FamilyPredicate, TimeSet, induced_containments, sensitivity_times  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
