"""Group structure of capitalized financial events under a capitalization factor."""

from .algebra import (
    NotInvertibleError,
    ProductKind,
    ProductPartials,
    centered_product,
    f_anti_product,
    f_inverse,
    f_product,
    fold_product,
    inverse_partials,
    n_fold_product,
    product_partials,
    state_anti_product,
    state_product,
    translate,
    translated_inverse,
)
from .capfactor import (
    CapFactor,
    FactorRangeError,
    FactorSpecError,
    central_difference,
    eval_derivative,
    eval_factor,
    force_of_interest,
    load_factor,
    parse_factor_spec,
    validate_factor,
)
from .events import (
    NEG_UNIT,
    UNIT,
    Classification,
    Event,
    State,
    classify,
    format_event,
    opposite,
    origin_time,
    parse_event,
    project_multitime,
    project_reference_time,
    project_state,
)
from .evolution import (
    EvolutionCurve,
    TangentVector,
    TranslatedTimeLine,
    UnsupportedTangentError,
    capital_evolution,
    double_translate_unit,
    evolve,
    exp_map,
    tangent,
    translated_add,
    translated_neg,
)
from .report import AxiomReport, Check
from .verify import LAW_IDS, VerifyConfig, run_all, run_law

__version__ = "0.1.0"
