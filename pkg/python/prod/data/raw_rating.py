from dataclasses import dataclass

#: Rating scale of the MovieLens data
MIN_RATING = 0.5
MAX_RATING = 5.0

#: Ratings at or above this are positives
POSITIVE_RATING = 3.5


class RatingOutOfScale(ValueError):

    def __init__(self, rating: float):
        self.rating = rating
        super().__init__(f"Rating {rating} outside [{MIN_RATING}, {MAX_RATING}]")


def binarize_label(rating: float) -> int:
    """1 iff the rating is at least 3.5.

    :raise RatingOutOfScale:
        Rating outside [0.5, 5.0]
    """
    if not MIN_RATING <= rating <= MAX_RATING:
        raise RatingOutOfScale(rating)
    return 1 if rating >= POSITIVE_RATING else 0


@dataclass(frozen=True)
class RawRating:

    """One validated row of a MovieLens ratings file."""

    user_id: int
    movie_id: int
    rating: float
    ts: float

    def __post_init__(self):
        if not MIN_RATING <= self.rating <= MAX_RATING:
            raise RatingOutOfScale(self.rating)

    def get_label(self) -> int:
        return binarize_label(self.rating)
