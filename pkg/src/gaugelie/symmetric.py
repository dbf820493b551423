"""Graded symmetric (co)algebra S(V) on a shifted space V = g[1].

A monomial is a sorted tuple of basis indices; odd elements never repeat.
Elements of S(V) are ``{monomial: coefficient}``; vectors of V are
``{index: coefficient}``.  ``par`` is the tuple of parities of the shifted
degrees, indexed like the basis.

The coproduct is the unshuffle one, ``Δ(v) = v⊗1 + 1⊗v`` extended
multiplicatively, so ``Δ̄(v·v) = 2 v⊗v`` for even ``v``.  Every splitting
enumerated here is over *positions* of the monomial, which takes care of
multiplicities automatically.
"""

from functools import lru_cache
from itertools import combinations, product


def sort_sign(word, par):
    """``(sign, monomial)`` with ``v_w1 ⋯ v_wk = sign · monomial`` in S(V);
    ``(0, None)`` when an odd element repeats."""
    w = list(word)
    sign = 1
    for i in range(1, len(w)):
        j = i
        while j > 0 and w[j - 1] > w[j]:
            if par[w[j - 1]] and par[w[j]]:
                sign = -sign
            w[j - 1], w[j] = w[j], w[j - 1]
            j -= 1
    for a, b in zip(w, w[1:]):
        if a == b and par[a]:
            return 0, None
    return sign, tuple(w)


def mono_mul(m1, m2, par):
    return sort_sign(m1 + m2, par)


def mono_degree(m, sdeg):
    return sum(sdeg[i] for i in m)


@lru_cache(maxsize=None)
def _perm_sign(parities, order):
    # Koszul sign of rearranging items (with the given parities) into ``order``
    sign = 1
    for a, b in combinations(range(len(order)), 2):
        x, y = order[a], order[b]
        if x > y and parities[x] and parities[y]:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def ordered_splits(parities, k):
    """All ordered splittings of positions ``0..n-1`` into ``k`` nonempty
    blocks (each block keeps its internal order), with Koszul signs."""
    n = len(parities)
    out = []
    if k > n or k < 1:
        return ()
    for assign in product(range(k), repeat=n):
        if len(set(assign)) != k:
            continue
        blocks = tuple(tuple(p for p in range(n) if assign[p] == b) for b in range(k))
        order = tuple(p for blk in blocks for p in blk)
        out.append((_perm_sign(parities, order), blocks))
    return tuple(out)


@lru_cache(maxsize=None)
def set_partitions(parities):
    """Unordered partitions of positions into nonempty blocks, blocks ordered
    by their smallest position, with Koszul signs."""
    n = len(parities)
    out = []

    def rec(p, blocks):
        if p == n:
            bl = tuple(tuple(b) for b in blocks)
            order = tuple(q for b in bl for q in b)
            out.append((_perm_sign(parities, order), bl))
            return
        for b in blocks:
            b.append(p)
            rec(p + 1, blocks)
            b.pop()
        blocks.append([p])
        rec(p + 1, blocks)
        blocks.pop()

    rec(0, [])
    return tuple(out)


@lru_cache(maxsize=None)
def pointed_partitions(parities):
    """Pairs ``(B0, partition of the rest)``: ``B0`` nonempty, the remaining
    positions set-partitioned (possibly into zero blocks).  Sign is for the
    rearrangement into ``B0, B1, ..., Br``."""
    n = len(parities)
    out = []
    for r in range(1, n + 1):
        for b0 in combinations(range(n), r):
            rest = tuple(p for p in range(n) if p not in b0)
            sub = set_partitions(tuple(parities[p] for p in rest)) if rest else ((1, ()),)
            for _, blocks in sub:
                bl = (b0,) + tuple(tuple(rest[q] for q in b) for b in blocks)
                order = tuple(q for b in bl for q in b)
                out.append((_perm_sign(parities, order), bl))
    return tuple(out)


def parities_of(m, par):
    return tuple(par[i] for i in m)


def vec_product(vectors, par, scale=1):
    """Product ``w1 · w2 ⋯ wk`` in S(W) of vectors of W."""
    out = {}
    for terms in product(*[list(v.items()) for v in vectors]):
        coeff = scale
        word = []
        for idx, c in terms:
            coeff = coeff * c
            word.append(idx)
        if not coeff:
            continue
        s, m = sort_sign(word, par)
        if not s:
            continue
        out[m] = out.get(m, 0) + s * coeff
    return {m: c for m, c in out.items() if c}


def add_into(acc, vec, scale=1):
    for k, v in vec.items():
        nv = acc.get(k, 0) + scale * v
        if nv:
            acc[k] = nv
        else:
            acc.pop(k, None)
    return acc


def apply_sym(op, element):
    """Apply a sparse map ``{monomial: vector}`` to an element of S(V)."""
    out = {}
    for m, c in element.items():
        v = op.get(m)
        if v:
            add_into(out, v, c)
    return out


def coalgebra_map(comps, m, par_src, par_tgt, max_arity=None):
    """Value on the monomial ``m`` of the coalgebra morphism with degree-0
    corestriction ``comps`` (``{monomial: vector}``)."""
    out = {}
    for sign, blocks in set_partitions(parities_of(m, par_src)):
        if max_arity is not None and len(blocks) > max_arity:
            continue
        vecs = []
        for b in blocks:
            v = comps.get(tuple(m[p] for p in b))
            if not v:
                break
            vecs.append(v)
        else:
            add_into(out, vec_product(vecs, par_tgt), sign)
    return out


def coderivation(brackets, m, par):
    """Value on ``m`` of the coderivation with corestriction ``brackets``:
    ``Q(v1⋯vn) = Σ ± q(v_I) · v_J`` over nonempty ``I``."""
    out = {}
    n = len(m)
    pars = parities_of(m, par)
    for r in range(1, n + 1):
        for I in combinations(range(n), r):
            J = tuple(p for p in range(n) if p not in I)
            q = brackets.get(tuple(m[p] for p in I))
            if not q:
                continue
            sign = _perm_sign(pars, I + J)
            rest = tuple(m[p] for p in J)
            for idx, c in q.items():
                s, mono = sort_sign((idx,) + rest, par)
                if s:
                    out[mono] = out.get(mono, 0) + sign * s * c
    return {k: v for k, v in out.items() if v}


def monomials(sdeg, k):
    """Sorted basis monomials of S^k(V): repeats only for even elements."""
    out = []
    n = len(sdeg)

    def rec(start, cur):
        if len(cur) == k:
            out.append(tuple(cur))
            return
        for i in range(start, n):
            if cur and cur[-1] == i and sdeg[i] % 2:
                continue
            cur.append(i)
            rec(i, cur)
            cur.pop()

    rec(0, [])
    return out
