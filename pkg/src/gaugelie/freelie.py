"""Free graded Lie algebras, truncated at word length N.

Elements live in the tensor algebra T(V) as ``{word: coeff}`` (words are
tuples of generator indices), with the graded commutator
``[u, v] = uv - (-1)^{|u||v|} vu``; in characteristic zero this realizes the
free Lie algebra exactly.  Words longer than N are dropped, i.e. we work in
the quotient by the ideal of brackets of length > N.

Basis: standard bracketings of Lyndon words, plus ``[u, u]`` for every odd
Lyndon word u (needed for odd generators, whose squares do not vanish).
Every basis element remembers its bracket tree, so Lie morphisms can be
evaluated into any target algebra.
"""

from fractions import Fraction
from functools import cached_property

from . import linalg
from .graded import GradedVectorSpace
from .symmetric import add_into


def lyndon_words(n, k):
    """Lyndon words over ``0..n-1`` of length ≤ k (Duval's algorithm)."""
    out = []
    if n == 0:
        return out
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < k:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return out


def standard_tree(w):
    """Standard bracketing: ``w = uv`` with v the longest proper Lyndon suffix."""
    if len(w) == 1:
        return w[0]
    for i in range(1, len(w)):
        v = w[i:]
        if _is_lyndon(v):
            return (standard_tree(w[:i]), standard_tree(v))
    raise ValueError(f"{w} is not a Lyndon word")


def _is_lyndon(w):
    return all(w < w[i:] + w[:i] for i in range(1, len(w)))


class FreeLieAlgebra:
    """Free Lie algebra on ``generators`` (a GradedVectorSpace), truncated at
    word length N, with an optional derivation given on generators as tree
    combinations ``{i: [(coeff, tree), ...]}``."""

    def __init__(self, generators, N, differential=None):
        self.generators = generators
        self.N = N
        self.gdeg = [generators.degree(i) for i in range(generators.dim)]
        self.gen_differential = differential or {}
        self._dgen = {i: self.tensor_of_combo(c) for i, c in self.gen_differential.items()}

    # tensor algebra ---------------------------------------------------------------

    def word_degree(self, w):
        return sum(self.gdeg[i] for i in w)

    def bracket(self, u, v):
        out = {}
        for w1, a in u.items():
            d1 = self.word_degree(w1)
            for w2, b in v.items():
                if len(w1) + len(w2) > self.N:
                    continue
                c = a * b
                add_into(out, {w1 + w2: c})
                s = -1 if d1 * self.word_degree(w2) % 2 else 1
                add_into(out, {w2 + w1: -s * c})
        return out

    def tensor(self, tree):
        if isinstance(tree, int):
            return {(tree,): Fraction(1)}
        return self.bracket(self.tensor(tree[0]), self.tensor(tree[1]))

    def tensor_of_combo(self, combo):
        out = {}
        for c, tree in combo:
            add_into(out, self.tensor(tree), c)
        return out

    def tree_degree(self, tree):
        if isinstance(tree, int):
            return self.gdeg[tree]
        return self.tree_degree(tree[0]) + self.tree_degree(tree[1])

    def d(self, u):
        """The derivation extending the generator differential."""
        out = {}
        for w, c in u.items():
            sign = 1
            for p, g in enumerate(w):
                dg = self._dgen.get(g)
                if dg:
                    for mid, e in dg.items():
                        if len(w) - 1 + len(mid) <= self.N:
                            add_into(out, {w[:p] + mid + w[p + 1:]: sign * c * e})
                if self.gdeg[g] % 2:
                    sign = -sign
        return out

    # basis ---------------------------------------------------------------------------

    @cached_property
    def _words(self):
        out = {}
        for w in lyndon_words(self.generators.dim, self.N):
            out.setdefault(len(w), []).append(w)
        return out

    def basis_of_length(self, n):
        """``[(label, tree, tensor)]`` for brackets of length n (cached)."""
        cache = self.__dict__.setdefault("_basis_cache", {})
        if n not in cache:
            out = []
            for w in sorted(self._words.get(n, [])):
                t = standard_tree(w)
                out.append((self.tree_label(t), t, self.tensor(t)))
            if n % 2 == 0:
                for w in self._words.get(n // 2, []):
                    if self.word_degree(w) % 2:
                        t = standard_tree(w)
                        out.append((self.tree_label((t, t)), (t, t), self.tensor((t, t))))
            out.sort(key=lambda e: e[0])
            cache[n] = out
        return cache[n]

    @cached_property
    def basis(self):
        """``[(label, tree, tensor)]`` sorted by (length, label)."""
        return [e for n in range(1, self.N + 1) for e in self.basis_of_length(n)]

    def _length(self, tree):
        return 1 if isinstance(tree, int) else self._length(tree[0]) + self._length(tree[1])

    def tree_label(self, tree):
        if isinstance(tree, int):
            return self.generators.label(tree)
        return f"[{self.tree_label(tree[0])},{self.tree_label(tree[1])}]"

    @cached_property
    def space(self):
        return GradedVectorSpace([(lab, self.tree_degree(t)) for lab, t, _ in self.basis])

    def coordinates(self, u):
        """Coordinates ``{label: coeff}`` of a Lie element; ValueError if u is
        not a Lie element of length ≤ N."""
        out = {}
        for n in sorted({len(w) for w in u}):
            part = {w: c for w, c in u.items() if len(w) == n}
            cols = self.basis_of_length(n)
            words = sorted(set(part).union(*(ten for _, _, ten in cols)))
            rows = [{j: ten.get(w, 0) for j, (_, _, ten) in enumerate(cols)} for w in words]
            x = linalg.solve(rows, [part.get(w, 0) for w in words])
            if x is None:
                raise ValueError("element is not a Lie element of length ≤ N")
            for j, v in x.items():
                out[cols[j][0]] = v
        return out

    def tree_of(self, label):
        for n in range(1, self.N + 1):
            for lab, t, _ in self.basis_of_length(n):
                if lab == label:
                    return t
        raise KeyError(label)

    def dims(self):
        out = {}
        for _, t, _ in self.basis:
            n = self._length(t)
            out[n] = out.get(n, 0) + 1
        return out

    def evaluate(self, u, values, bracket):
        """Image of the Lie element u under the Lie map sending generator i to
        ``values[i]`` (vectors), for a target bracket ``bracket(v, w)``."""
        cache = {}

        def ev(t):
            key = t
            if key in cache:
                return cache[key]
            if isinstance(t, int):
                val = dict(values.get(t, {}))
            else:
                val = bracket(ev(t[0]), ev(t[1]))
            cache[key] = val
            return val

        out = {}
        for lab, c in self.coordinates(u).items():
            add_into(out, ev(self.tree_of(lab)), c)
        return out

    def as_dg_lie(self, truncation=3, name=None):
        """The truncated free Lie algebra as an ``LInftyAlgebra`` (small inputs only)."""
        from .algebra import LInftyAlgebra

        labels = [lab for lab, _, _ in self.basis]
        tens = {lab: ten for lab, _, ten in self.basis}
        differential = {lab: self.coordinates(self.d(tens[lab])) for lab in labels}
        brackets = []
        for a in labels:
            for b in labels:
                val = self.coordinates(self.bracket(tens[a], tens[b]))
                if val:
                    brackets.append(((a, b), val))
        return LInftyAlgebra.from_exterior(self.space, truncation,
                                           differential={k: v for k, v in differential.items() if v},
                                           brackets=brackets, name=name)


__all__ = ["FreeLieAlgebra", "lyndon_words", "standard_tree"]
