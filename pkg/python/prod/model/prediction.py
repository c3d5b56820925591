import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Prediction:

    logit: float

    #: sigmoid(logit)
    probability: float

    @staticmethod
    def from_logit(logit: float) -> "Prediction":
        if logit >= 0:
            p = 1.0 / (1.0 + math.exp(-logit))
        else:
            z = math.exp(logit)
            p = z / (1.0 + z)
        return Prediction(float(logit), p)
