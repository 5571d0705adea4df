"""P and Q recursions and the psi cocycle values built from them.

P[k, i] (k >= -r) and Q[m, i] (m >= 1), with i in [-r, -1], are the coordinates of
t^k u dt and t^-m u dt on the u-part of the Omega basis:

    (2k + r + 3) P[k, i] = -sum_{j=1}^{r} (3j + 2k - 2r) a_j P[k-r+j-1, i]     (k >= 0)
    (2m - 3) a1 Q[m, i]  =  sum_{j=2}^{r+1} (3j - 2m) a_j Q[m-j+1, i]          (m >= r+1)

with P[l, i] = delta(l, i) for -r <= l <= -1 and Q[m, i] = delta(m, -i) for 1 <= m <= r.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DomainError
from .kahler import CurveSpec, OmegaClass


class PQTable:
    """Lazily memoized P/Q values for one curve.

    Not thread-safe while filling; call :meth:`prefill` before sharing.
    """

    def __init__(self, curve: CurveSpec):
        self.curve = curve
        self.memo_p: dict[tuple[int, int], object] = {}
        self.memo_q: dict[tuple[int, int], object] = {}

    @property
    def r(self) -> int:
        return self.curve.r

    def _check_i(self, i: int) -> None:
        if not -self.r <= i <= -1:
            raise DomainError(f"i = {i} outside [-{self.r}, -1]")

    def p_poly(self, k: int, i: int):
        self._check_i(i)
        if k < -self.r:
            raise DomainError(f"P is defined for k >= -{self.r}, got {k}")
        if k <= -1:
            return Fraction(int(k == i))
        key = (k, i)
        if key not in self.memo_p:
            # fill upward so the recursion never nests deeply
            start = max((kk for kk, ii in self.memo_p if ii == i), default=-1) + 1
            for kk in range(start, k + 1):
                self.memo_p[(kk, i)] = self._p_step(kk, i)
        return self.memo_p[key]

    def _p_step(self, k: int, i: int):
        r, curve = self.r, self.curve
        total = Fraction(0)
        for j in range(1, r + 1):
            w = 3 * j + 2 * k - 2 * r
            aj = curve.coeff(j)
            if not w or not aj:
                continue
            prev = self.p_poly(k - r + j - 1, i)
            if prev:
                total = total + aj * prev * w
        return -total * Fraction(1, 2 * k + r + 3)

    def q_poly(self, m: int, i: int):
        self._check_i(i)
        if m < 1:
            raise DomainError(f"Q is defined for m >= 1, got {m}")
        return self._q(m, i)

    def _q(self, m: int, i: int):
        if m <= 0:
            # never reached for m >= r+1 since m-j+1 >= m-r; kept as the stated convention
            return Fraction(0)
        if m <= self.r:
            return Fraction(int(m == -i))
        key = (m, i)
        if key not in self.memo_q:
            start = max((mm for mm, ii in self.memo_q if ii == i), default=self.r) + 1
            for mm in range(start, m + 1):
                self.memo_q[(mm, i)] = self._q_step(mm, i)
        return self.memo_q[key]

    def _q_step(self, m: int, i: int):
        r, curve = self.r, self.curve
        total = Fraction(0)
        for j in range(2, r + 2):
            w = 3 * j - 2 * m
            aj = curve.coeff(j)
            if not w or not aj:
                continue
            prev = self._q(m - j + 1, i)
            if prev:
                total = total + aj * prev * w
        return total * curve.inv_a1 * Fraction(1, 2 * m - 3)

    def u_coords(self, s: int) -> list:
        """[coefficient of w_k for k = 1..r] for the class of t^s u dt."""
        if s >= -self.r:
            return [self.p_poly(s, -k) for k in range(1, self.r + 1)]
        return [self.q_poly(-s, -k) for k in range(1, self.r + 1)]

    def psi(self, i: int, j: int) -> OmegaClass:
        return OmegaClass((Fraction(0), *self.u_coords(i + j - 1)))

    def prefill(self, k_max: int, m_max: int) -> PQTable:
        for i in range(-self.r, 0):
            if k_max >= 0:
                self.p_poly(k_max, i)
            if m_max >= 1:
                self.q_poly(m_max, i)
        return self


def p_poly(table: PQTable, k: int, i: int):
    return table.p_poly(k, i)


def q_poly(table: PQTable, m: int, i: int):
    return table.q_poly(m, i)


def psi(table: PQTable, i: int, j: int) -> OmegaClass:
    return table.psi(i, j)
