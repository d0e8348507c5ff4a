"""Fibonacci coin schedules.

The operator rule ``U[k+1] = U[k] U[k-1]`` applies its rightmost factor
first, so the time-ordered letter words obey ``v[k+1] = v[k-1] + v[k]`` with
``v[1] = "1"`` and ``v[2] = "2"``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, InvalidIndexError

DEFAULT_MAX_LENGTH = 10**8


@dataclass(frozen=True)
class CoinSchedule:
    """Time-ordered word over ``{"1", "2"}``.

    ``generation_index`` is the Fibonacci index K of the word this schedule
    was cut from; ``letters`` may be a proper prefix of that word.
    """

    letters: str
    generation_index: int | None = None

    def __post_init__(self):
        bad = set(self.letters) - {"1", "2"}
        if bad:
            raise ValueError(f"schedule letters must be '1' or '2', got {sorted(bad)}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters

    @property
    def is_prefix(self):
        """True when the word was truncated from a longer Fibonacci word."""
        return self.generation_index is not None and len(self.letters) != fibonacci_number(self.generation_index)

    @classmethod
    def constant(cls, letter, length):
        return cls(letter * length)

    def to_text(self):
        return self.letters + "\n"


def fibonacci_number(k):
    """F(1) = F(2) = 1, F(k+1) = F(k) + F(k-1)."""
    if k < 1:
        raise InvalidIndexError(f"Fibonacci index must be >= 1, got {k}")
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return a


def fibonacci_word(k, max_length=DEFAULT_MAX_LENGTH):
    if k < 1:
        raise InvalidIndexError(f"Fibonacci index must be >= 1, got {k}")
    if fibonacci_number(k) > max_length:
        raise BudgetExceededError(
            f"word {k} has length {fibonacci_number(k)} > max_length={max_length}"
        )
    if k == 1:
        return CoinSchedule("1", 1)
    prev, cur = "1", "2"
    for _ in range(k - 2):
        prev, cur = cur, prev + cur
    return CoinSchedule(cur, k)


def schedule_for_horizon(T, max_length=DEFAULT_MAX_LENGTH):
    """First ``T`` letters of ``v[K]`` with K the smallest index such that F(K) >= T.

    Prefixes of successive words disagree (``v[4]`` starts with "2", ``v[5]``
    with "1"), so K is pinned and carried in ``generation_index``.
    """
    if T < 0:
        raise ValueError(f"horizon must be non-negative, got {T}")
    if T == 0:
        return CoinSchedule("", None)
    k = 1
    while fibonacci_number(k) < T:
        k += 1
    word = fibonacci_word(k, max_length=max_length)
    return CoinSchedule(word.letters[:T], k)
