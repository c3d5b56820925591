from typing import Protocol


# For typing.Protocol see https://stackoverflow.com/questions/68472236/type-hint-for-callable-that-takes-kwargs
class ProgressUpdate(Protocol):
    """Informs any listener about the state of a training pass.

    Called after every chunk of mini-batches is applied.

    Hook this up with `tqdm` for an interactive progress bar.
    """

    def __call__(
        self,
        current_example: int,
        total_examples: int,
        steps: int,
        mean_loss: float,
        last_timestamp: float,
    ):
        """
        :param current_example:
            Number of examples consumed so far in this pass

        :param total_examples:
            Size of the pass

        :param steps:
            Mini-batch steps applied so far

        :param mean_loss:
            Mean log loss over the last chunk

        :param last_timestamp:
            Event time of the last example consumed
        """
