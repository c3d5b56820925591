from .occurrence_counter import OccurrenceCounter
from .count_min_sketch import CountMinSketch
from .exact_counter import ExactCounter
