"""Explicit periodic-orbit eigenvalues of regular scaling quantum graphs."""

from .errors import (
    EnumerationCapError as EnumerationCapError,
    NotRegularError as NotRegularError,
    NumericalFailure as NumericalFailure,
    QGraphError as QGraphError,
)
from .explicit import (
    EigenvalueRecord as EigenvalueRecord,
    ExpansionConfig as ExpansionConfig,
    convergence_scan as convergence_scan,
    explicit_eigenvalue as explicit_eigenvalue,
    oracle_eigenvalue as oracle_eigenvalue,
    power_law_fit as power_law_fit,
)
from .graph_model import (
    Region as Region,
    ScalingChain as ScalingChain,
    StepGraph as StepGraph,
    build_step_graph as build_step_graph,
    chain_to_trig_polynomial as chain_to_trig_polynomial,
    system_from_json as system_from_json,
)
from .orbits import (
    OrbitClass as OrbitClass,
    PrimeOrbit as PrimeOrbit,
    lyndon_words as lyndon_words,
    necklace_count as necklace_count,
    orbit_classes as orbit_classes,
    orbit_stats as orbit_stats,
)
from .spectral import (
    RegularityReport as RegularityReport,
    TrigPolynomial as TrigPolynomial,
    TrigTerm as TrigTerm,
    evaluate as evaluate,
    find_root_in_zone as find_root_in_zone,
    regularity as regularity,
    root_zone as root_zone,
    scan_roots as scan_roots,
    separator as separator,
    staircase_count as staircase_count,
)
