"""Enumeration budget shared by every exhaustive loop.

Each top-level operation that enumerates candidates charges a Budget; the
cap comes from HALLFORGE_MAX_ENUM (candidate visits per operation)."""

import os

DEFAULT_MAX_ENUM = 10_000_000


class CapExceeded(Exception):
    """Raised when an enumeration would visit more candidates than allowed."""

    def __init__(self, op, limit):
        super().__init__("enumeration cap exceeded in %s (limit %d)" % (op, limit))
        self.op = op
        self.limit = limit


def max_enum():
    raw = os.environ.get("HALLFORGE_MAX_ENUM")
    if not raw:
        return DEFAULT_MAX_ENUM
    try:
        val = int(raw)
    except ValueError:
        raise ValueError("HALLFORGE_MAX_ENUM must be an integer, got %r" % raw)
    if val <= 0:
        raise ValueError("HALLFORGE_MAX_ENUM must be positive, got %d" % val)
    return val


class Budget:
    """Counts candidate visits for one logical operation."""

    __slots__ = ("op", "limit", "spent")

    def __init__(self, op, limit=None):
        self.op = op
        self.limit = max_enum() if limit is None else limit
        self.spent = 0

    def spend(self, n=1):
        self.spent += n
        if self.spent > self.limit:
            raise CapExceeded(self.op, self.limit)

    def check_upfront(self, n):
        """Refuse an enumeration whose size is known to bust the cap."""
        if self.spent + n > self.limit:
            raise CapExceeded(self.op, self.limit)
