from typing import Dict

import numpy as np

from .dense_params import DenseParams


class AdamOptimizer:

    """Adam over :py:class:`DenseParams`, updated in place.

    Its moment estimates belong to the training shard's dense block and
    are snapshotted with it.
    """

    def __init__(self, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.__lr = lr
        self.__beta1 = beta1
        self.__beta2 = beta2
        self.__eps = eps
        self.__m: Dict[str, np.ndarray] = {}
        self.__v: Dict[str, np.ndarray] = {}
        self.__t = 0

    def get_step_count(self) -> int:
        return self.__t

    def step(self, params: DenseParams, grads: DenseParams):
        self.__t += 1
        b1, b2 = self.__beta1, self.__beta2
        correction1 = 1.0 - b1 ** self.__t
        correction2 = 1.0 - b2 ** self.__t
        grad_arrays = grads.named_arrays()
        for name, param in params.named_arrays().items():
            g = grad_arrays[name]
            m = self.__m.setdefault(name, np.zeros_like(param))
            v = self.__v.setdefault(name, np.zeros_like(param))
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            param -= self.__lr * (m / correction1) / (np.sqrt(v / correction2) + self.__eps)

    def state_arrays(self) -> Dict[str, np.ndarray]:
        arrays = {"adam.t": np.array([self.__t], dtype=np.float64)}
        for name in self.__m:
            arrays[f"adam.m.{name}"] = self.__m[name]
            arrays[f"adam.v.{name}"] = self.__v[name]
        return arrays

    def load_state_arrays(self, arrays: Dict[str, np.ndarray]):
        self.__t = int(arrays["adam.t"][0]) if "adam.t" in arrays else 0
        self.__m = {n[len("adam.m."):]: np.array(a) for n, a in arrays.items() if n.startswith("adam.m.")}
        self.__v = {n[len("adam.v."):]: np.array(a) for n, a in arrays.items() if n.startswith("adam.v.")}

    def same_state(self, other: "AdamOptimizer") -> bool:
        mine, theirs = self.state_arrays(), other.state_arrays()
        return mine.keys() == theirs.keys() and all(mine[n].tobytes() == theirs[n].tobytes() for n in mine)
