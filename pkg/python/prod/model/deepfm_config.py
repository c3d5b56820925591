from dataclasses import dataclass
from typing import Tuple

DEFAULT_MLP_LAYERS = (64, 32, 1)


@dataclass(frozen=True)
class DeepFMConfig:
    """Shape of a DeepFM network.

    Hidden layers use ReLU; the MLP reads the concatenated slot
    embeddings, so its input width is ``num_slots * dim``. An empty
    `mlp_layers` disables the dense component.
    """

    #: Feature fields per example
    num_slots: int

    #: Embedding width
    dim: int

    #: Layer widths, last one is 1
    mlp_layers: Tuple[int, ...] = DEFAULT_MLP_LAYERS

    def __post_init__(self):
        if self.num_slots < 1:
            raise ValueError(f"num_slots must be >= 1, got {self.num_slots}")
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        if self.mlp_layers and self.mlp_layers[-1] != 1:
            raise ValueError(f"Last MLP layer must have width 1, got {self.mlp_layers}")
        if any(width < 1 for width in self.mlp_layers):
            raise ValueError(f"MLP widths must be positive, got {self.mlp_layers}")

    @property
    def mlp_input_width(self) -> int:
        return self.num_slots * self.dim
