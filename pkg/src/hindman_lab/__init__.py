"""Desk-scale laboratory for coloring phenomena in semigroups.

Core objects: finite semigroups on Cayley tables and lazily enumerated
infinite families; on top of them, adversarial colorings, finite-products
(FP / FP-hat) machinery, and a Ramsey-based extraction pipeline that
certifies [h,d]-presented subsemigroups.
"""

from .backend import active_backend, worker_count
from .coloring import (
    Coloring,
    MonoVerdict,
    almost_mono_check,
    coloring_from_fn,
    constant_coloring,
    gcolor,
    mod_coloring,
    mono_check,
    ncolor,
    ncolor_color,
    truecolor,
    truecolor_plan,
    verify_ncolor_property,
    verify_truecolor_invariants,
)
from .core import (
    ESCAPED,
    FiniteSemigroup,
    LazyFamily,
    MovingEvidence,
    Orbit,
    PartialTruncation,
    PeriodicVerdict,
    SubgroupInfo,
    boolean_group_basis,
    build_cayley,
    closure,
    element_order,
    finitely_synchronizing_check,
    group_identity,
    group_inverses,
    idempotents,
    is_group,
    is_periodic,
    maximal_subgroup,
    moving_evidence,
    orbit,
    restrict,
    synchronizing_check,
)
from .errors import (
    AssocViolation,
    BadPattern,
    BadSpec,
    CapExceeded,
    CaseInapplicable,
    EscapesTruncation,
    FormatError,
    HindmanLabError,
    NotAGroup,
    NotIdempotent,
    NotOutsideS2,
    OrderViolation,
    PrecondViolation,
    PremiseFailed,
    RamseyFail,
    RangeError,
    StuckAt,
    UnknownLemma,
)
from .families import (
    FamilySpec,
    HDReport,
    SheReport,
    TypeHDModel,
    build_family,
    build_typehd,
    cyclic_group,
    fan,
    fan_truncation,
    hd_report,
    left_zero,
    monogenic,
    natmax,
    natmax_truncation,
    natmin,
    natmin_truncation,
    natplus,
    parse_eqpattern,
    parse_family_spec,
    right_zero,
    verify_hd,
    verify_lemma_she,
    verify_s2_finite,
    whymodfin,
    z2sum,
    zero_semigroup,
)
from .fileio import (
    dumps_cayley,
    dumps_coloring,
    loads_cayley,
    loads_coloring,
    read_cayley,
    read_coloring,
    write_cayley,
    write_coloring,
)
from .fpsets import (
    FpFamily,
    FpWitness,
    MonoSubsemigroup,
    WhyModFinAudit,
    fp,
    fp_word_count,
    fphat,
    fphat_value_set,
    fphat_word_count,
    refine_fphat,
    search_fp_mod_finite,
    search_mono_subsemigroup,
    whymodfin_fp_audit,
)
from .shevrin import (
    EdgeColoring,
    PatternReport,
    Thm35Report,
    TypeHDCertificate,
    classify_patterns,
    extract_typehd,
    ramsey_find,
    shevrin_pair_coloring,
    verify_thm35_direction3to1,
)

__version__ = "0.1.0"
