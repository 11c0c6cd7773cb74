"""
Sequence automata for the two parity sequences.

t(n), the Thue-Morse sequence, is generated by the morphism 0 -> 01, 1 -> 10
(iterated to the requested width). r(n), the parity of the number of zeros in
the binary expansion, has no morphism of this form that reads leading zeros
correctly, so its base-4 automaton is given directly.
"""
from __future__ import annotations

import numpy as np

from automata.dfao import Dfao, dfao_from_morphism, minimize_dfao
from numeration.digits import NumerationSystem
from numeration.sequences import thue_morse_t

# zeros contributed by a base-4 digit written as two bits, and as a leading digit
_INNER_ZEROS = {0: 2, 1: 1, 2: 1, 3: 0}
_LEADING_ZEROS = {1: 0, 2: 1, 3: 0}


def tm_dfao(width: int = 4) -> Dfao:
    """Thue-Morse over base `width`, a power of two."""
    image = "".join(str(thue_morse_t(i)) for i in range(width))
    flipped = "".join("1" if c == "0" else "0" for c in image)
    return dfao_from_morphism(f"0->{image} 1->{flipped}")


def r_dfao_base4() -> Dfao:
    # states: 0 = only leading zeros so far, 1 = even zero count, 2 = odd zero count
    start = [0] + [1 + _LEADING_ZEROS[d] % 2 for d in (1, 2, 3)]
    even = [1 + _INNER_ZEROS[d] % 2 for d in range(4)]
    odd = [2 - _INNER_ZEROS[d] % 2 for d in range(4)]
    table = np.array([start, even, odd], dtype=np.int32)
    return minimize_dfao(Dfao((NumerationSystem(4),), table, np.array([0, 0, 1])))
