
class UndefinedMetric(ValueError):
    """Metric has no value for the given labels, e.g. AUC over one class."""

    def __init__(self, metric: str, positives: int, negatives: int):
        self.metric = metric
        self.positives = positives
        self.negatives = negatives

        super().__init__(f"{metric} undefined with {positives} positive and {negatives} negative labels")
