"""Calendar months: the only time resolution the toolkit supports."""

from __future__ import annotations

import calendar
import datetime as dt
from dataclasses import dataclass
from functools import total_ordering


@total_ordering
@dataclass(frozen=True)
class MonthStamp:
    """A calendar month, ordered lexicographically by (year, month)."""

    year: int
    month: int

    def __post_init__(self):
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    def __lt__(self, other: "MonthStamp") -> bool:
        return (self.year, self.month) < (other.year, other.month)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    @classmethod
    def parse(cls, text: str) -> "MonthStamp":
        """Parse 'YYYY-MM' (a trailing '-DD' part is accepted and dropped)."""
        parts = text.strip().split("-")
        if len(parts) not in (2, 3):
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise ValueError(f"expected YYYY-MM, got {text!r}") from exc

    @classmethod
    def of(cls, day: dt.date) -> "MonthStamp":
        return cls(day.year, day.month)

    def add(self, n: int) -> "MonthStamp":
        """The month `n` steps later (or earlier for negative `n`)."""
        idx = self.year * 12 + (self.month - 1) + n
        return MonthStamp(idx // 12, idx % 12 + 1)

    def months_until(self, other: "MonthStamp") -> int:
        """Signed number of months from self to other."""
        return (other.year - self.year) * 12 + (other.month - self.month)

    def first_day(self) -> dt.date:
        return dt.date(self.year, self.month, 1)

    def last_day(self) -> dt.date:
        return dt.date(self.year, self.month, calendar.monthrange(self.year, self.month)[1])


def month_range(start: MonthStamp, end: MonthStamp) -> list[MonthStamp]:
    """All months from start to end inclusive."""
    n = start.months_until(end)
    if n < 0:
        raise ValueError(f"start {start} is after end {end}")
    return [start.add(i) for i in range(n + 1)]
