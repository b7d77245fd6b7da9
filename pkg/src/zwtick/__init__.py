"""Exact engine for tick-extended ZW diagrams.

Terms are interpreted two ways: a pure matrix semantics over the ring of
cyclotomic scalars Q[w] with w = exp(i pi / 4), and a superoperator
semantics obtained by wire doubling, under which every term denotes a
Hermiticity-preserving map.  Operators have a unique normal form, which
makes semantic equality of diagrams decidable; rule schemas, a derived
equation corpus, and quantum-information checks build on that.
"""

from .diagram import (
    ArityError,
    Cap,
    Compose,
    Cup,
    Diagram,
    DiagramParseError,
    Empty,
    Fswap,
    Id,
    Swap,
    Tensor,
    Tick,
    WSpider,
    ZSpider,
    bend_cap,
    bend_cup,
    bra0,
    bra1,
    compose_many,
    conjugate_term,
    dagger,
    generator_count,
    ground,
    has_tick,
    id_n,
    ket0,
    ket1,
    not_gate,
    parse_diagram,
    permutation_diagram,
    print_diagram,
    render_dot,
    subdiagrams,
    tensor_many,
    ticked_cap,
    ticked_cup,
    transpose_term,
)
from .normalform import (
    NFTerm,
    NormalForm,
    NormalFormError,
    canonical_of_map,
    diagrams_equal,
    format_nf,
    nf_from_matrix,
    nf_of_diagram,
    nf_to_diagram,
    nf_to_matrix,
    parse_nf,
)
from .qinfo import (
    BlochVector,
    bloch,
    from_bloch,
    internal_dagger,
    is_unitary_semantic,
    min_pt_eigenvalue,
    partial_transpose,
    ppt_check,
    sesqui_pairing,
    spin_flip,
    spin_flip_diagram,
)
from .rules import (
    CheckEntry,
    CheckReport,
    EquationCorpusEntry,
    MatchError,
    RuleError,
    RuleSchema,
    RULES,
    RULES_BY_NAME,
    apply_rule,
    check_corpus,
    check_soundness,
    instantiate,
    lemma_corpus,
    rule_named,
    subterm_at,
)
from .scalar import (
    HALF,
    I,
    MINUS_ONE,
    OMEGA,
    ONE,
    SQRT2,
    Scalar,
    ScalarParseError,
    TWO,
    ZERO,
    format_scalar,
    parse_scalar,
)
from .semantics import (
    Matrix,
    bend_inputs,
    SemanticsError,
    apply_superop,
    choi,
    format_matrix,
    hp,
    interp,
    iota,
    is_completely_positive,
    is_hermiticity_preserving,
    is_psd,
    parse_matrix,
    proper_choi,
    psi,
    psi_inv,
    state_operator,
    tolerance,
    unzip,
)

__version__ = "0.1.0"

__all__ = [
    "apply_rule",
    "apply_superop",
    "ArityError",
    "bend_cap",
    "bend_cup",
    "bend_inputs",
    "bloch",
    "BlochVector",
    "bra0",
    "bra1",
    "canonical_of_map",
    "Cap",
    "check_corpus",
    "check_soundness",
    "CheckEntry",
    "CheckReport",
    "choi",
    "Compose",
    "compose_many",
    "conjugate_term",
    "Cup",
    "dagger",
    "Diagram",
    "DiagramParseError",
    "diagrams_equal",
    "Empty",
    "EquationCorpusEntry",
    "format_matrix",
    "format_nf",
    "format_scalar",
    "from_bloch",
    "Fswap",
    "generator_count",
    "ground",
    "HALF",
    "has_tick",
    "hp",
    "I",
    "Id",
    "id_n",
    "instantiate",
    "internal_dagger",
    "interp",
    "iota",
    "is_completely_positive",
    "is_hermiticity_preserving",
    "is_psd",
    "is_unitary_semantic",
    "ket0",
    "ket1",
    "lemma_corpus",
    "MatchError",
    "Matrix",
    "min_pt_eigenvalue",
    "MINUS_ONE",
    "nf_from_matrix",
    "nf_of_diagram",
    "nf_to_diagram",
    "nf_to_matrix",
    "NFTerm",
    "NormalForm",
    "NormalFormError",
    "not_gate",
    "OMEGA",
    "ONE",
    "parse_diagram",
    "parse_matrix",
    "parse_nf",
    "parse_scalar",
    "partial_transpose",
    "permutation_diagram",
    "ppt_check",
    "print_diagram",
    "proper_choi",
    "psi",
    "psi_inv",
    "render_dot",
    "rule_named",
    "RuleError",
    "RULES",
    "RULES_BY_NAME",
    "RuleSchema",
    "Scalar",
    "ScalarParseError",
    "SemanticsError",
    "sesqui_pairing",
    "spin_flip",
    "spin_flip_diagram",
    "SQRT2",
    "state_operator",
    "subdiagrams",
    "subterm_at",
    "Swap",
    "Tensor",
    "tensor_many",
    "Tick",
    "ticked_cap",
    "ticked_cup",
    "tolerance",
    "transpose_term",
    "TWO",
    "unzip",
    "WSpider",
    "ZERO",
    "ZSpider",
]
