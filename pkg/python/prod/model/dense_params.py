from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .deepfm_config import DeepFMConfig


@dataclass
class DenseParams:
    """DeepFM weights that are not keyed by feature id.

    First-order (linear) weights are per feature id and live in width-1
    sparse tables next to the embeddings, not here.

    The same structure doubles as the gradient container.
    """

    #: Global bias, shape (1,)
    bias: np.ndarray

    #: MLP weight matrices, layer `l` has shape (in_l, out_l)
    weights: List[np.ndarray] = field(default_factory=list)

    #: MLP bias vectors, layer `l` has shape (out_l,)
    biases: List[np.ndarray] = field(default_factory=list)

    @staticmethod
    def init(config: DeepFMConfig, rng: Optional[np.random.Generator] = None, zero_mlp: bool = False) -> "DenseParams":
        """He-normal hidden layers, small output layer, zero biases."""
        rng = rng if rng is not None else np.random.default_rng(0)
        weights, biases = [], []
        width = config.mlp_input_width
        for l, out in enumerate(config.mlp_layers):
            if zero_mlp:
                w = np.zeros((width, out))
            else:
                last = l == len(config.mlp_layers) - 1
                scale = 0.01 if last else np.sqrt(2.0 / width)
                w = rng.normal(0.0, scale, size=(width, out))
            weights.append(w)
            biases.append(np.zeros(out))
            width = out
        return DenseParams(np.zeros(1), weights, biases)

    def named_arrays(self) -> Dict[str, np.ndarray]:
        """Name -> array references, in a stable order."""
        arrays = {"bias": self.bias}
        for l, (w, b) in enumerate(zip(self.weights, self.biases)):
            arrays[f"mlp.w{l}"] = w
            arrays[f"mlp.b{l}"] = b
        return arrays

    @staticmethod
    def from_named_arrays(arrays: Dict[str, np.ndarray]) -> "DenseParams":
        layers = sum(1 for name in arrays if name.startswith("mlp.w"))
        return DenseParams(
            np.array(arrays["bias"], dtype=np.float64),
            [np.array(arrays[f"mlp.w{l}"], dtype=np.float64) for l in range(layers)],
            [np.array(arrays[f"mlp.b{l}"], dtype=np.float64) for l in range(layers)],
        )

    def copy(self) -> "DenseParams":
        return DenseParams.from_named_arrays(self.named_arrays())

    def zeros_like(self) -> "DenseParams":
        return DenseParams.from_named_arrays({name: np.zeros_like(a) for name, a in self.named_arrays().items()})

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.named_arrays().values())

    def same_state(self, other: "DenseParams") -> bool:
        mine, theirs = self.named_arrays(), other.named_arrays()
        return mine.keys() == theirs.keys() and all(mine[n].tobytes() == theirs[n].tobytes() for n in mine)

    def num_layers(self) -> int:
        return len(self.weights)
