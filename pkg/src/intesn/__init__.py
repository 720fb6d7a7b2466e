"""Integer echo state networks and a conventional float ESN baseline."""

from .hd import (
    BIPOLAR,
    INTEGER,
    TERNARY,
    HyperVector,
    ItemMemory,
    Quantizer,
    bits_per_element,
    bundle,
    cleanup,
    clip,
    cyclic_shift,
    dot_similarity,
    linear_level_memory,
    pack_integers,
    random_bipolar,
    random_item_memory,
    scatter_level_memory,
    sparsify,
    unpack_integers,
)
from .readout import ReadoutMatrix, readout_apply, ridge_fit, winner_take_all
from .reservoir import (
    Esn,
    EsnConfig,
    EsnWeights,
    IntEsn,
    IntEsnConfig,
    generate_esn_weights,
    run_collect,
)

__version__ = "0.1.0"
