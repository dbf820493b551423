"""Graded vector spaces over Q, degree-homogeneous maps, Koszul signs, and
cohomology with a deterministic contraction.

Grading is cohomological: differentials raise degree by one.  Basis vectors
are addressed by a global index into ``GradedVectorSpace.basis``, which is
sorted by ``(degree, label)``.  Linear maps are stored sparsely and
column-major: ``entries[source_index] = {target_index: coefficient}``.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import MalformedInput, MalformedPermutation, ShapeMismatch


class GradedVectorSpace:
    """Finite family of named basis vectors, each carrying an integer degree."""

    __slots__ = ("basis", "_index")

    def __init__(self, components=None):
        # components: {degree: [labels]} or an iterable of (label, degree)
        pairs = []
        if isinstance(components, dict):
            for deg, labels in components.items():
                pairs.extend((lab, int(deg)) for lab in labels)
        elif components:
            pairs = [(lab, int(deg)) for lab, deg in components]
        labels = [lab for lab, _ in pairs]
        if len(set(labels)) != len(labels):
            raise MalformedInput(f"duplicate basis labels in {labels}")
        for lab in labels:
            if not isinstance(lab, str) or not lab:
                raise MalformedInput(f"basis labels must be nonempty strings, got {lab!r}")
        self.basis = tuple(sorted(pairs, key=lambda p: (p[1], p[0])))
        self._index = {lab: i for i, (lab, _) in enumerate(self.basis)}

    @property
    def dim(self):
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def labels(self):
        return [lab for lab, _ in self.basis]

    def index(self, label):
        try:
            return self._index[label]
        except KeyError:
            raise MalformedInput(f"unknown basis label {label!r}") from None

    def label(self, i):
        return self.basis[i][0]

    def degree(self, i):
        return self.basis[i][1]

    def degrees(self):
        return sorted({d for _, d in self.basis})

    def indices_in_degree(self, n):
        return [i for i, (_, d) in enumerate(self.basis) if d == n]

    @property
    def components(self):
        out = {}
        for lab, d in self.basis:
            out.setdefault(d, []).append(lab)
        return out

    def direct_sum(self, other):
        return GradedVectorSpace(list(self.basis) + list(other.basis))

    def __eq__(self, other):
        return isinstance(other, GradedVectorSpace) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)

    def __repr__(self):
        return "GradedVectorSpace({})".format(
            ", ".join(f"{lab}:{d}" for lab, d in self.basis)
        )


def _clean(vec):
    return {k: v for k, v in vec.items() if v}


@dataclass(frozen=True, eq=False)
class GradedLinearMap:
    """Degree-``shift`` linear map; missing entries are zero."""

    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for j, col in self.entries.items():
            col = {i: Fraction(v) for i, v in col.items() if v}
            if not col:
                continue
            for i in col:
                if self.target.degree(i) != self.source.degree(j) + self.shift:
                    raise ShapeMismatch(
                        f"entry {self.source.label(j)} -> {self.target.label(i)} "
                        f"does not have degree {self.shift}"
                    )
            clean[j] = col
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_labels(cls, source, target, shift, pairs):
        """Build from ``{src_label: {dst_label: coeff}}``."""
        entries = {}
        for src, col in pairs.items():
            j = source.index(src)
            e = entries.setdefault(j, {})
            for dst, c in col.items():
                i = target.index(dst)
                e[i] = e.get(i, 0) + Fraction(c)
        return cls(source, target, shift, entries)

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, {i: {i: Fraction(1)} for i in range(space.dim)})

    @classmethod
    def zero(cls, source, target, shift=0):
        return cls(source, target, shift, {})

    def __call__(self, vec):
        out = {}
        for j, c in vec.items():
            for i, v in self.entries.get(j, {}).items():
                out[i] = out.get(i, 0) + c * v
        return _clean(out)

    def column(self, j):
        return dict(self.entries.get(j, {}))

    def compose(self, other):
        """``self ∘ other``."""
        if other.target != self.source:
            raise ShapeMismatch("composition of maps with mismatched spaces")
        return GradedLinearMap(
            other.source, self.target, self.shift + other.shift,
            linalg.matmul(self.entries, other.entries),
        )

    def __matmul__(self, other):
        return self.compose(other)

    def _combine(self, other, sign):
        if (self.source, self.target, self.shift) != (other.source, other.target, other.shift):
            raise ShapeMismatch("cannot add maps of different shapes")
        out = {j: dict(c) for j, c in self.entries.items()}
        for j, col in other.entries.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                tgt[i] = tgt.get(i, 0) + sign * v
        return GradedLinearMap(self.source, self.target, self.shift, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return GradedLinearMap(
            self.source, self.target, self.shift,
            {j: {i: v * c for i, v in col.items()} for j, col in self.entries.items()},
        )

    def __eq__(self, other):
        return (
            isinstance(other, GradedLinearMap)
            and self.source == other.source
            and self.target == other.target
            and self.shift == other.shift
            and self.entries == other.entries
        )

    def is_zero(self):
        return not self.entries

    def block(self, n):
        """Dense matrix from degree ``n`` to degree ``n + shift`` (rows = targets)."""
        cols = self.source.indices_in_degree(n)
        rows = self.target.indices_in_degree(n + self.shift)
        return [[self.entries.get(j, {}).get(i, Fraction(0)) for j in cols] for i in rows]

    def rows(self):
        return linalg.to_rows(self.entries)

    def rank(self):
        return linalg.rank(self.rows().values())

    def is_injective(self):
        return self.rank() == self.source.dim

    def is_surjective(self):
        return self.rank() == self.target.dim

    def to_labels(self):
        return {
            self.source.label(j): {self.target.label(i): v for i, v in sorted(col.items())}
            for j, col in sorted(self.entries.items())
        }

    def __repr__(self):
        return f"GradedLinearMap(shift={self.shift}, {self.to_labels()})"


def koszul_sign(permutation, degrees):
    """Sign of moving homogeneous elements of the given degrees into the order
    ``permutation`` (1-based: position ``r`` receives element ``permutation[r]``)."""
    k = len(permutation)
    if len(degrees) != k or sorted(permutation) != list(range(1, k + 1)):
        raise MalformedPermutation(f"{permutation!r} is not a permutation of 1..{len(degrees)}")
    sign = 1
    for r, s in combinations(range(k), 2):
        a, b = permutation[r], permutation[s]
        if a > b and degrees[a - 1] % 2 and degrees[b - 1] % 2:
            sign = -sign
    return sign


def check_complex(space, d):
    """Labels of basis vectors on which ``d∘d`` is nonzero (empty: valid complex)."""
    if d.shift != 1 or d.source != space or d.target != space:
        raise ShapeMismatch("differential must be a degree +1 endomorphism")
    dd = d.compose(d)
    return [space.label(j) for j in sorted(dd.entries)]


@dataclass(frozen=True, eq=False)
class ContractionData:
    """Splitting of ``(ambient, d)`` onto ``cohomology``: ``dh + hd = 1 - ip``."""

    ambient: GradedVectorSpace
    d: GradedLinearMap
    cohomology: GradedVectorSpace
    p: GradedLinearMap
    i: GradedLinearMap
    h: GradedLinearMap

    def violations(self):
        """Names of the failed invariants (empty list when all hold)."""
        bad = []
        one_a = GradedLinearMap.identity(self.ambient)
        one_h = GradedLinearMap.identity(self.cohomology)
        if check_complex(self.ambient, self.d):
            bad.append("d∘d = 0")
        if self.p.compose(self.i) != one_h:
            bad.append("p∘i = 1")
        if self.d.compose(self.h) + self.h.compose(self.d) != one_a - self.i.compose(self.p):
            bad.append("dh + hd = 1 - ip")
        if not self.h.compose(self.h).is_zero():
            bad.append("h∘h = 0")
        if not self.p.compose(self.h).is_zero():
            bad.append("p∘h = 0")
        if not self.h.compose(self.i).is_zero():
            bad.append("h∘i = 0")
        return bad

    def is_valid(self):
        return not self.violations()


def cohomology_contraction(space, d):
    """Deterministic contraction of ``(space, d)`` onto its cohomology.

    In each degree the basis splits as ``C ⊕ B ⊕ H``: ``C`` is spanned by the
    pivot columns of ``d`` (first nonzero column rule), ``B = d(C)`` of the
    previous degree, and ``H`` by kernel vectors attached to the free columns,
    kept greedily when independent of ``B`` and the earlier choices.  Each
    cohomology class is labelled by its free column's basis label.
    """
    bad = check_complex(space, d)
    if bad:
        raise MalformedInput(f"d∘d ≠ 0 on {bad}")
    rows_all = d.rows()
    complement = {}   # degree -> list of pivot source indices (C)
    reps = []         # (label, degree, vector)
    for n in space.degrees():
        idx = space.indices_in_degree(n)
        local = {j: k for k, j in enumerate(idx)}
        tgt = space.indices_in_degree(n + 1)
        rows = [{local[j]: v for j, v in rows_all.get(i, {}).items() if j in local} for i in tgt]
        pivots, _ = linalg.echelon(rows)
        complement[n] = [idx[c] for c in sorted(pivots)]
        kernel = linalg.nullspace(rows, len(idx))
        boundaries = [d.column(j) for j in complement.get(n - 1, [])]
        span = [dict(b) for b in boundaries]
        r0 = linalg.rank(span)
        for z in kernel:
            free = min(c for c, v in z.items() if v == 1 and c not in pivots)
            vec = {idx[c]: v for c, v in z.items()}
            if linalg.rank(span + [vec]) > r0:
                span.append(vec)
                r0 += 1
                reps.append((space.label(idx[free]), n, vec))
    cohom = GradedVectorSpace([(lab, n) for lab, n, _ in reps])
    i_map = GradedLinearMap(cohom, space, 0, {cohom.index(lab): vec for lab, _, vec in reps})

    # express every basis vector in the adapted basis C ⊕ B ⊕ H, degree by degree
    p_entries, h_entries = {}, {}
    for n in space.degrees():
        idx = space.indices_in_degree(n)
        cols = []  # (kind, payload, vector)
        for j in complement.get(n, []):
            cols.append(("C", j, {j: Fraction(1)}))
        for j in complement.get(n - 1, []):
            cols.append(("B", j, d.column(j)))
        for lab, m, vec in reps:
            if m == n:
                cols.append(("H", cohom.index(lab), vec))
        if len(cols) != len(idx):
            raise AssertionError("adapted basis has the wrong size")
        local = {j: k for k, j in enumerate(idx)}
        # solve  sum_c x_c * col_c = e_j  for each basis vector e_j
        rows = [dict() for _ in idx]
        for c, (_, _, vec) in enumerate(cols):
            for j, v in vec.items():
                rows[local[j]][c] = v
        for j in idx:
            x = linalg.solve(rows, [1 if jj == j else 0 for jj in idx])
            for c, v in x.items():
                kind, payload, _ = cols[c]
                if kind == "H":
                    p_entries.setdefault(j, {})[payload] = v
                elif kind == "B":
                    # h(d e_payload) = e_payload
                    h_entries.setdefault(j, {})[payload] = v
    p_map = GradedLinearMap(space, cohom, 0, p_entries)
    h_map = GradedLinearMap(space, space, -1, h_entries)
    return ContractionData(space, d, cohom, p_map, i_map, h_map)
