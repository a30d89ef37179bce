"""Input checks shared by the estimator wrappers."""

from __future__ import annotations

from .extract import S2R


def check_reports(X) -> list:
    """A single report string or a sequence of them -> list of strings."""
    if isinstance(X, str):
        return [X]
    try:
        items = list(X)
    except TypeError:
        raise TypeError(f"expected a report string or a sequence of them, got {type(X).__name__}") from None
    bad = [type(x).__name__ for x in items if not isinstance(x, str)]
    if bad:
        raise TypeError(f"reports must be strings, got {bad[0]}")
    return items


def check_s2rs(X) -> list:
    """A sequence of S2R objects (or their dict form) -> list of S2R."""
    if isinstance(X, (str, bytes, dict)):
        raise TypeError("expected a sequence of steps")
    out = []
    for i, item in enumerate(X):
        if isinstance(item, S2R):
            out.append(item)
        elif isinstance(item, dict):
            out.append(S2R.from_dict(item))
        else:
            raise TypeError(f"step {i} is a {type(item).__name__}, expected S2R or dict")
    return out
