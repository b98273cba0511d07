from enum import Enum


class Status(str, Enum):
    """Position of a point relative to a closed convex cone."""

    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"

    def __str__(self):
        return self.value
