"""Time codes permuted into suffix-array order (Icode^Psi)."""
from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch


@dataclass(frozen=True)
class AlignedTimes:
    icode_psi: np.ndarray
    sigma_t: int


def align_times(store, sa):
    sa = np.asarray(sa, dtype=np.int64)
    if len(sa) != store.n:
        raise LengthMismatch(f"suffix array has {len(sa)} entries, store has n={store.n}")
    return AlignedTimes(store.Icode[sa], store.sigma_t)
