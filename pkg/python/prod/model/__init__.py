from .deepfm_config import DeepFMConfig
from .dense_params import DenseParams
from .prediction import Prediction
from .deepfm import DeepFM, ForwardCache, ExampleGradients, sigmoid
from .metrics import auc, log_loss
from .adam_optimizer import AdamOptimizer
from .shape_mismatch import ShapeMismatch
from .undefined_metric import UndefinedMetric
