from qasa.superalg.core import (
    Algebra,
    Element,
    Gen,
    GROUP_KINDS,
    InhomogeneousParity,
    MixedAlgebra,
    UnknownGenerator,
    ad_chain,
    ad_e,
    ad_f,
    conjugate,
    format_gen,
    multiply,
    super_bracket,
    sym_over,
)
from qasa.superalg.text import ExprSyntaxError, format_element, parse_element
