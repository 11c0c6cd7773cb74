from numeration.digits import (
    DigitWord,
    NumerationError,
    NumerationSystem,
    checked,
    from_digits,
    pad_to_length,
    to_digits,
)
from numeration.sequences import (
    rarefied_f,
    rarefied_g,
    rarefied_table,
    thue_morse_t,
    zeros_parity_r,
)
from numeration.pseudopower import check_bnd_inequalities, pseudopower

__all__ = [
    "DigitWord",
    "NumerationError",
    "NumerationSystem",
    "checked",
    "check_bnd_inequalities",
    "from_digits",
    "pad_to_length",
    "pseudopower",
    "rarefied_f",
    "rarefied_g",
    "rarefied_table",
    "thue_morse_t",
    "to_digits",
    "zeros_parity_r",
]
