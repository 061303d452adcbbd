"""Linear canonical transforms of finite signals and the ambiguities of
phase retrieval from their magnitudes."""
from .ambiguity import (
    AmbiguitySolution,
    Autocorrelation,
    AutocorrPolynomial,
    IntensityPolynomial,
    autocorr_polynomial,
    autocorrelation,
    build_solution,
    canonicalize,
    enumerate_solutions,
    find_roots,
    intensity_from_samples,
    same_class,
    solution_scale,
    trivial_reflect,
    trivial_rotate,
    trivial_shift,
    verify_intensity_match,
)
from .continuous import (
    SampledFunction,
    autocorrelation_identity_check,
    continuous_lct,
    verify_prop31,
)
from .core import (
    FrequencyGrid,
    LctParams,
    Signal,
    chirp_modulate,
    forward,
    inverse,
    kernel,
    make_params,
    preset,
)
from .errors import *  # noqa: F401,F403
from .roots import RootSet, aberth, pair_roots

__version__ = "0.1.0"
