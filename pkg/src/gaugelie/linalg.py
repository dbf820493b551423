"""Exact sparse linear algebra over the rationals.

Matrices are lists of sparse rows ``{column: Fraction}``.  All elimination
uses the same deterministic rule: rows are processed in order and each row's
pivot is its first (smallest) nonzero column.
"""

from fractions import Fraction


def _reduce(row, pivots):
    # pivots: {col: reduced row with row[col] == 1}; eliminate every pivot column from row
    row = dict(row)
    for col in sorted(c for c in row if c in pivots):
        c = row.get(col)
        if not c:
            continue
        for k, v in pivots[col].items():
            nv = row.get(k, 0) - c * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)
    return row


def echelon(rows):
    """Fully reduced echelon form.

    Returns ``(pivots, order)``: ``pivots[col]`` is the reduced row whose
    leading entry (equal to 1) sits in ``col``; ``order`` lists pivot columns
    in the order they were found.
    """
    pivots = {}
    order = []
    for row in rows:
        r = _reduce({k: Fraction(v) for k, v in row.items() if v}, pivots)
        if not r:
            continue
        col = min(r)
        lead = r[col]
        r = {k: v / lead for k, v in r.items()}
        for other in pivots.values():
            c = other.get(col)
            if c:
                for k, v in r.items():
                    nv = other.get(k, 0) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[col] = r
        order.append(col)
    return pivots, order


def rank(rows):
    return len(echelon(rows)[0])


def nullspace(rows, ncols):
    """Basis of ``{x : A x = 0}``, one vector per free column (free entry 1)."""
    pivots, _ = echelon(rows)
    basis = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for col, r in pivots.items():
            c = r.get(f)
            if c:
                v[col] = -c
        basis.append(v)
    return basis


def solve(rows, rhs, ncols=None):
    """Solve ``A x = b`` exactly; free variables are set to zero.

    ``rows`` are the sparse rows of ``A`` and ``rhs`` the matching entries of
    ``b``.  Returns ``{col: value}`` or ``None`` when inconsistent.
    """
    # unknowns are shifted to columns >= 1; column 0 carries the right-hand side
    shifted = []
    for row, b in zip(rows, rhs):
        r = {k + 1: v for k, v in row.items() if v}
        if b:
            r[0] = Fraction(b)
        shifted.append(r)
    pivots = {}
    for r in shifted:
        r = _reduce(r, pivots)
        cols = [c for c in r if c != 0]
        if not cols:
            if r.get(0):
                return None
            continue
        col = min(cols)
        lead = r[col]
        r = {k: v / lead for k, v in r.items()}
        for other in pivots.values():
            c = other.get(col)
            if c:
                for k, v in r.items():
                    nv = other.get(k, 0) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
        pivots[col] = r
    return {col - 1: r.get(0, Fraction(0)) for col, r in pivots.items() if r.get(0)}


def matmul(a, b):
    """Product of sparse column-major maps ``{col: {row: v}}``."""
    out = {}
    for j, col in b.items():
        acc = {}
        for k, v in col.items():
            for i, w in a.get(k, {}).items():
                acc[i] = acc.get(i, 0) + v * w
        acc = {i: v for i, v in acc.items() if v}
        if acc:
            out[j] = acc
    return out


def to_rows(columns):
    """Column-major ``{col: {row: v}}`` to row-major ``{row: {col: v}}``."""
    rows = {}
    for j, col in columns.items():
        for i, v in col.items():
            if v:
                rows.setdefault(i, {})[j] = v
    return rows


class Linear:
    """Sparse affine form ``{unknown: coefficient}`` used as a symbolic scalar;
    the constant term sits under the key ``CONST``.

    Plugging these in place of rationals turns any linear computation into
    the rows of its matrix.
    """

    CONST = -1

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = terms or {}

    @classmethod
    def var(cls, i):
        return cls({i: Fraction(1)})

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if isinstance(other, Linear):
            t = dict(self.terms)
            for k, v in other.terms.items():
                nv = t.get(k, 0) + v
                if nv:
                    t[k] = nv
                else:
                    t.pop(k, None)
            return Linear(t)
        if not other:
            return self
        return self + Linear({Linear.CONST: other})

    __radd__ = __add__

    def __neg__(self):
        return Linear({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, Linear):
            raise TypeError("product of two linear forms is not linear")
        if not c:
            return Linear()
        return Linear({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Linear({k: v / c for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, Linear):
            return self.terms == other.terms
        return other == 0 and not self.terms

    def __repr__(self):
        return f"Linear({self.terms})"


class Poly:
    """Polynomial in one variable ``t`` with exact coefficients (tuple, low first)."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = list(coeffs)
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, v):
        return cls((v,))

    @classmethod
    def monomial(cls, v, power):
        return cls((0,) * power + (v,))

    def __bool__(self):
        return bool(self.c)

    def __add__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return self
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        a = self.c + (0,) * (n - len(self.c))
        b = other.c + (0,) * (n - len(other.c))
        return Poly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-x for x in self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not other:
                return Poly()
            return Poly(x * other for x in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if x:
                for j, y in enumerate(other.c):
                    out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return Poly(x / c for x in self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(other) if other else Poly()
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    @property
    def degree(self):
        return len(self.c) - 1

    def integrate(self):
        """Antiderivative vanishing at 0."""
        return Poly((0,) + tuple(x / (i + 1) for i, x in enumerate(self.c)))

    def derivative(self):
        return Poly(x * i for i, x in enumerate(self.c) if i)

    def __call__(self, s):
        acc = 0
        for x in reversed(self.c):
            acc = acc * s + x
        return acc

    def __repr__(self):
        return f"Poly({list(self.c)})"


def solve_affine(equations):
    """Solve ``form == value`` for pairs of (Linear or scalar, scalar)."""
    rows, rhs = [], []
    for form, value in equations:
        if isinstance(form, Linear):
            t = dict(form.terms)
            const = t.pop(Linear.CONST, 0)
        else:
            t, const = {}, form
        rows.append(t)
        rhs.append(value - const)
    return solve(rows, rhs)
