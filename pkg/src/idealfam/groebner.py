"""Buchberger's algorithm, normal forms, ideal membership, Hilbert numerators.

The kernel works on raw data: a polynomial is a dict mapping exponent
tuples to nonzero coefficients, a basis element is a monic `_Gen` record.
Public entry points convert to and from :class:`~idealfam.ring.Polynomial`.
"""

from __future__ import annotations

import heapq
from fractions import Fraction

from .errors import ResourceLimitError, ValidationError
from .ring import Monomial, MonomialOrder, Polynomial, PolynomialRing, PrimeField

DEFAULT_PAIR_LIMIT = 1_000_000

_STRATEGIES = ("normal", "lcm", "fifo")


class _Gen:
    """Monic basis polynomial in kernel form."""

    __slots__ = ("lm", "mask", "tail", "sugar", "idx")

    def __init__(self, lm, mask, tail, sugar, idx):
        self.lm = lm
        self.mask = mask
        self.tail = tail      # tuple of (exps, coeff), lead term excluded
        self.sugar = sugar
        self.idx = idx


def _mask(exps):
    m = 0
    for i, e in enumerate(exps):
        if e:
            m |= 1 << i
    return m


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


def _make_gen(terms, heapkey, field, sugar, idx):
    """Monic kernel record from a nonzero term dict."""
    ordered = sorted(terms, key=heapkey)
    lm = ordered[0]
    lc = terms[lm]
    if lc != field.one:
        inv = field.inv(lc)
        mul = field.mul
        tail = tuple((e, mul(terms[e], inv)) for e in ordered[1:])
    else:
        tail = tuple((e, terms[e]) for e in ordered[1:])
    return _Gen(lm, _mask(lm), tail, sugar, idx)


def _reduce(terms, gens, heapkey, field, *, full=True, track=False):
    """Divide a term dict by monic generators, largest monomial first.

    Generators are tried in list order, so the result is deterministic.
    Returns ``(remainder, quotients)``; quotients maps a generator's
    position in ``gens`` to a term dict, and is None unless ``track``.
    """
    work = dict(terms)
    heap = [heapkey(e) + (e,) for e in work]
    heapq.heapify(heap)
    remainder = {}
    quotients = {} if track else None
    prime = field.p if isinstance(field, PrimeField) else None
    ngens = len(gens)
    while heap:
        m = heapq.heappop(heap)[-1]
        c = work.get(m)
        if not c:
            continue
        mm = _mask(m)
        red = None
        pos = 0
        while pos < ngens:
            g = gens[pos]
            if g.mask & mm == g.mask and _divides(g.lm, m):
                red = g
                break
            pos += 1
        if red is None:
            del work[m]
            if full:
                remainder[m] = c
                continue
            remainder[m] = c
            break
        del work[m]
        shift = tuple(a - b for a, b in zip(m, red.lm))
        if track:
            q = quotients.setdefault(pos, {})
            q[shift] = field.add(q.get(shift, field.zero), c)
        if prime is not None:
            for e2, c2 in red.tail:
                e = tuple(a + b for a, b in zip(e2, shift))
                prev = work.get(e)
                if prev is None:
                    v = -c * c2 % prime
                    if v:
                        work[e] = v
                        heapq.heappush(heap, heapkey(e) + (e,))
                else:
                    v = (prev - c * c2) % prime
                    if v:
                        work[e] = v
                    else:
                        del work[e]
        else:
            for e2, c2 in red.tail:
                e = tuple(a + b for a, b in zip(e2, shift))
                prev = work.get(e)
                if prev is None:
                    v = field.neg(field.mul(c, c2))
                    if v != field.zero:
                        work[e] = v
                        heapq.heappush(heap, heapkey(e) + (e,))
                else:
                    v = field.sub(prev, field.mul(c, c2))
                    if v != field.zero:
                        work[e] = v
                    else:
                        del work[e]
    remainder.update(work)
    return remainder, quotients


def _spoly(f, g, field):
    """S-polynomial term dict of two monic kernel generators."""
    lcm = _lcm(f.lm, g.lm)
    u = tuple(a - b for a, b in zip(lcm, f.lm))
    v = tuple(a - b for a, b in zip(lcm, g.lm))
    acc = {}
    zero = field.zero
    for e, c in f.tail:
        acc[tuple(a + b for a, b in zip(e, u))] = c
    for e, c in g.tail:
        key = tuple(a + b for a, b in zip(e, v))
        val = field.sub(acc.get(key, zero), c)
        if val == zero:
            acc.pop(key, None)
        else:
            acc[key] = val
    return acc


def _interreduce(dicts, heapkey, field):
    """Full mutual reduction of a list of term dicts; drops zeros."""
    polys = [dict(t) for t in dicts if t]
    while True:
        changed = False
        out = []
        for i, t in enumerate(polys):
            others = out + polys[i + 1 :]
            gens = [_make_gen(o, heapkey, field, 0, 0) for o in others]
            r, _ = _reduce(t, gens, heapkey, field, full=True)
            if r != t:
                changed = True
            if r:
                lead = min(r, key=heapkey)
                lc = r[lead]
                if lc != field.one:
                    inv = field.inv(lc)
                    r = {e: field.mul(c, inv) for e, c in r.items()}
                out.append(r)
        polys = out
        if not changed:
            return polys


def _buchberger_kernel(
    inputs,
    heapkey,
    field,
    *,
    degree_limit=None,
    pair_limit=DEFAULT_PAIR_LIMIT,
    strategy="normal",
    tail_reduce=True,
    interreduce=True,
):
    """Groebner basis of term dicts; returns (gens, truncated).

    Pair handling follows the classic update procedure: the product
    criterion and chain criterion prune the queue, pairs are selected by
    minimal lcm degree with a sugar tie-break (``normal``), by the lcm's
    position in the order (``lcm``), or in creation order (``fifo``).
    With ``interreduce`` the result is the unique reduced basis; without
    it the basis is only lead-minimal, which membership tests do not
    notice but is cheaper on large inputs.
    """
    if strategy not in _STRATEGIES:
        raise ValidationError(f"unknown selection strategy {strategy!r}")
    polys = _interreduce(inputs, heapkey, field)
    f = []
    for t in polys:
        sugar = max(sum(e) for e in t)
        f.append(_make_gen(t, heapkey, field, sugar, len(f)))

    pair_meta = {}
    serial = [0]

    def meta(i, j):
        key = (i, j) if i < j else (j, i)
        got = pair_meta.get(key)
        if got is None:
            lcm = _lcm(f[i].lm, f[j].lm)
            deg = sum(lcm)
            sugar = max(
                f[i].sugar + deg - sum(f[i].lm),
                f[j].sugar + deg - sum(f[j].lm),
            )
            got = (deg, sugar, heapkey(lcm), serial[0])
            serial[0] += 1
            pair_meta[key] = got
        return got

    def update(G, B, ih):
        # Incorporate generator ih; prune pairs with the product and
        # chain criteria, drop basis elements with newly divisible leads.
        mh = f[ih].lm
        mask_h = f[ih].mask
        C = sorted(G)
        D = []
        while C:
            ig = C.pop(0)
            mg = f[ig].lm
            lcm_hg = _lcm(mh, mg)
            disjoint = mask_h & f[ig].mask == 0

            def lcm_divides(ip):
                return _divides(_lcm(mh, f[ip].lm), lcm_hg)

            if disjoint or (
                not any(lcm_divides(ip) for ip in C)
                and not any(lcm_divides(ip) for ip, _ in D)
            ):
                D.append((ig, disjoint))
        E = [ig for ig, disjoint in D if not disjoint]

        B_new = set()
        for (i, j) in B:
            lcm_ij = _lcm(f[i].lm, f[j].lm)
            if (
                not _divides(mh, lcm_ij)
                or _lcm(f[i].lm, mh) == lcm_ij
                or _lcm(f[j].lm, mh) == lcm_ij
            ):
                B_new.add((i, j))
        for ig in E:
            i, j = (ig, ih) if ig < ih else (ih, ig)
            B_new.add((i, j))
            meta(i, j)

        G_new = {ig for ig in G if not _divides(mh, f[ig].lm)}
        G_new.add(ih)
        return G_new, B_new

    G = set()
    CP = set()
    for i in range(len(f)):
        G, CP = update(G, CP, i)

    if strategy == "normal":
        def select_key(pair):
            deg, sugar, hk, _ = pair_meta[pair]
            return (deg, sugar, hk, pair)
    elif strategy == "lcm":
        def select_key(pair):
            return (pair_meta[pair][2], pair)
    else:
        def select_key(pair):
            return (pair_meta[pair][3], pair)

    heap = [(select_key(pair), pair) for pair in CP]
    heapq.heapify(heap)
    ordered_gens = [f[k] for k in sorted(G)]
    truncated = False
    while heap:
        if len(CP) > pair_limit:
            raise ResourceLimitError(
                f"pair queue exceeded the configured bound ({pair_limit})"
            )
        pair = heapq.heappop(heap)[1]
        if pair not in CP:
            continue
        CP.discard(pair)
        i, j = pair
        sugar = pair_meta[pair][1]
        if degree_limit is not None and sugar > degree_limit:
            truncated = True
            continue
        s = _spoly(f[i], f[j], field)
        if not s:
            continue
        r, _ = _reduce(s, ordered_gens, heapkey, field, full=tail_reduce)
        if not r:
            continue
        h = _make_gen(r, heapkey, field, sugar, len(f))
        f.append(h)
        G, CP = update(G, CP, h.idx)
        ordered_gens = [f[k] for k in sorted(G)]
        for pr in CP:
            if h.idx in pr:
                heapq.heappush(heap, (select_key(pr), pr))

    # Minimal generators: drop any element whose lead is divisible by another.
    alive = sorted(G)
    minimal = [
        i
        for i in alive
        if not any(j != i and _divides(f[j].lm, f[i].lm) for j in alive)
    ]
    dicts = []
    for i in minimal:
        d = {f[i].lm: field.one}
        d.update(dict(f[i].tail))
        dicts.append(d)
    if interreduce:
        # Full tail interreduction until stable gives the unique reduced basis.
        records = [_make_gen(d, heapkey, field, 0, k) for k, d in enumerate(dicts)]
        while True:
            changed = False
            for a in range(len(dicts)):
                others = records[:a] + records[a + 1 :]
                r, _ = _reduce(dicts[a], others, heapkey, field, full=True)
                if r != dicts[a]:
                    changed = True
                    dicts[a] = r
                    records[a] = _make_gen(r, heapkey, field, 0, a)
            if not changed:
                break
        dicts = [d for d in dicts if d]
    dicts.sort(key=lambda d: heapkey(min(d, key=heapkey)))
    gens = [
        _make_gen(d, heapkey, field, max(sum(e) for e in d), k)
        for k, d in enumerate(dicts)
    ]
    return gens, truncated


class IdealPresentation:
    """Homogeneous generators of a proper ideal in a fixed ring."""

    __slots__ = ("ring", "generators")

    def __init__(self, ring: PolynomialRing, generators):
        gens = tuple(generators)
        if not gens:
            raise ValidationError("an ideal presentation needs at least one generator")
        for g in gens:
            if not isinstance(g, Polynomial) or g.ring != ring:
                raise ValidationError("generators must be polynomials in the given ring")
            if not g:
                raise ValidationError("generators must be nonzero")
            d = g.homogeneous_degree()
            if d is None:
                raise ValidationError(f"generator {g} is not homogeneous")
            if d == 0:
                raise ValidationError("degree-0 generators give the unit ideal")
        self.ring = ring
        self.generators = gens

    def degrees(self):
        return tuple(g.homogeneous_degree() for g in self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, IdealPresentation)
            and other.ring == self.ring
            and other.generators == self.generators
        )

    def __repr__(self):
        return f"IdealPresentation({len(self.generators)} generators, {self.ring!r})"


class GroebnerBasis:
    """A monic Groebner basis with a fixed deterministic element order."""

    __slots__ = ("ring", "elements", "reduced", "truncated_at", "source", "_kernel")

    def __init__(self, ring, elements, *, reduced, truncated_at=None, source=None):
        self.ring = ring
        self.elements = tuple(elements)
        self.reduced = reduced
        self.truncated_at = truncated_at
        self.source = source
        self._kernel = None

    def _gens(self):
        if self._kernel is None:
            heapkey = self.ring.order.heapkey_fn()
            field = self.ring.field
            kernel = []
            for k, p in enumerate(self.elements):
                terms = dict(p.terms)
                kernel.append(_make_gen(terms, heapkey, field, 0, k))
            self._kernel = kernel
        return self._kernel

    def normal_form(self, p: Polynomial) -> Polynomial:
        if p.ring != self.ring:
            raise ValidationError("polynomial is not in the basis ring")
        if self.truncated_at is not None and p and p.degree() > self.truncated_at:
            raise ValidationError(
                f"normal form of degree {p.degree()} is not exact against a "
                f"basis truncated at degree {self.truncated_at}"
            )
        r, _ = _reduce(
            dict(p.terms), self._gens(), self.ring.order.heapkey_fn(), self.ring.field, full=True
        )
        return self.ring.poly(r)

    def contains(self, p: Polynomial) -> bool:
        return not self.normal_form(p)

    __contains__ = contains

    def leading_monomials(self):
        return tuple(p.lm for p in self.elements)

    def hilbert_numerator(self) -> "HilbertNumerator":
        if not self.reduced:
            raise ValidationError("Hilbert numerator needs a reduced basis")
        if self.truncated_at is not None:
            raise ValidationError("Hilbert numerator needs an untruncated basis")
        lms = [p.lm.exps for p in self.elements]
        coeffs = _hilbert_kernel(_minimal_monomials(lms), {})
        return HilbertNumerator(coeffs, self.ring.nvars)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and other.ring == self.ring
            and other.elements == self.elements
        )

    def __repr__(self):
        return f"GroebnerBasis({len(self.elements)} elements, reduced={self.reduced})"


def buchberger(
    ideal: IdealPresentation,
    order=None,
    *,
    degree_limit=None,
    pair_limit=DEFAULT_PAIR_LIMIT,
    strategy="normal",
    tail_reduce=True,
    interreduce=True,
) -> GroebnerBasis:
    """Reduced Groebner basis of an ideal presentation.

    With ``degree_limit`` the computation discards S-pairs above the limit
    and returns a basis that is exact in all degrees up to the limit
    (generators are processed degree by degree for homogeneous input).
    ``interreduce=False`` skips the final tail interreduction; the result
    still yields correct normal forms but is not the canonical reduced
    basis.
    """
    ring = ideal.ring
    if order is not None:
        if isinstance(order, str):
            order = MonomialOrder(order)
        if order != ring.order:
            ring = ring.with_order(order)
    heapkey = ring.order.heapkey_fn()
    field = ring.field
    inputs = [dict(g.terms) for g in ideal.generators]
    gens, truncated = _buchberger_kernel(
        inputs,
        heapkey,
        field,
        degree_limit=degree_limit,
        pair_limit=pair_limit,
        strategy=strategy,
        tail_reduce=tail_reduce,
        interreduce=interreduce,
    )
    elements = []
    for g in gens:
        terms = {g.lm: field.one}
        terms.update(dict(g.tail))
        elements.append(ring.poly(terms))
    return GroebnerBasis(
        ring,
        elements,
        reduced=interreduce,
        truncated_at=degree_limit if truncated else None,
        source=ideal,
    )


def normal_form(p: Polynomial, basis: GroebnerBasis) -> Polynomial:
    return basis.normal_form(p)


def is_member(p: Polynomial, basis: GroebnerBasis) -> bool:
    return basis.contains(p)


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    """S-polynomial of two nonzero polynomials in a common ring."""
    if f.ring != g.ring:
        raise ValidationError("polynomials live in different rings")
    if not f or not g:
        raise ValidationError("S-polynomial of zero is undefined")
    ring = f.ring
    heapkey = ring.order.heapkey
    field = ring.field
    gf = _make_gen(dict(f.terms), heapkey, field, 0, 0)
    gg = _make_gen(dict(g.terms), heapkey, field, 0, 1)
    return ring.poly(_spoly(gf, gg, field))


def _minimal_monomials(exps_list):
    """Minimal generators of the monomial ideal spanned by the input."""
    uniq = sorted(set(exps_list), key=lambda e: (sum(e), e))
    out = []
    for e in uniq:
        if not any(_divides(m, e) for m in out):
            out.append(e)
    return out


def _support_masks_disjoint(gens):
    seen = 0
    for e in gens:
        m = _mask(e)
        if m & seen:
            return False
        seen |= m
    return True


def _poly_mul_1mt(coeffs, d):
    """Multiply an integer t-polynomial (dict) by (1 - t^d)."""
    out = dict(coeffs)
    for k, v in coeffs.items():
        out[k + d] = out.get(k + d, 0) - v
    return {k: v for k, v in out.items() if v}


def _hilbert_kernel(gens, memo):
    """Numerator coefficients for a minimally generated monomial ideal.

    Standard splitting recursion: pick the most frequent variable v and
    use N(M) = N(M + (v)) + t * N(M : v); disjoint supports terminate
    with the Koszul product.
    """
    if not gens:
        return {0: 1}
    key = frozenset(gens)
    got = memo.get(key)
    if got is not None:
        return got
    if any(sum(e) == 0 for e in gens):
        return {}
    if _support_masks_disjoint(gens):
        out = {0: 1}
        for e in gens:
            out = _poly_mul_1mt(out, sum(e))
        memo[key] = out
        return out
    nvars = len(gens[0])
    counts = [0] * nvars
    for e in gens:
        for i, x in enumerate(e):
            if x:
                counts[i] += 1
    pivot = max(range(nvars), key=lambda i: (counts[i], -i))
    # M + (x_pivot): drop generators containing the pivot, add the pivot.
    plus = [e for e in gens if not e[pivot]]
    unit = tuple(1 if i == pivot else 0 for i in range(nvars))
    plus = _minimal_monomials(plus + [unit])
    # M : x_pivot: lower the pivot exponent by one where positive.
    colon = [
        tuple(x - 1 if i == pivot and x else x for i, x in enumerate(e)) for e in gens
    ]
    colon = _minimal_monomials(colon)
    a = _hilbert_kernel(tuple(plus), memo)
    b = _hilbert_kernel(tuple(colon), memo)
    out = dict(a)
    for k, v in b.items():
        out[k + 1] = out.get(k + 1, 0) + v
    out = {k: v for k, v in out.items() if v}
    memo[key] = out
    return out


class HilbertNumerator:
    """Numerator N(t) with Hilb_{R/I}(t) = N(t) / (1 - t)^nvars."""

    __slots__ = ("coeffs", "nvars")

    def __init__(self, coeffs, nvars: int):
        self.coeffs = tuple(sorted((int(d), int(c)) for d, c in dict(coeffs).items() if c))
        self.nvars = nvars

    def coefficient(self, d: int) -> int:
        for deg, c in self.coeffs:
            if deg == d:
                return c
        return 0

    def as_dict(self):
        return dict(self.coeffs)

    def dimensions(self, upto: int):
        """Graded dimensions of R/I in degrees 0..upto."""
        from math import comb

        n = self.nvars
        out = []
        for e in range(upto + 1):
            total = 0
            for d, c in self.coeffs:
                if d <= e:
                    total += c * comb(n - 1 + e - d, n - 1)
            out.append(total)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, HilbertNumerator)
            and other.coeffs == self.coeffs
            and other.nvars == self.nvars
        )

    def __hash__(self):
        return hash((self.coeffs, self.nvars))

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d, c in self.coeffs:
            body = "1" if d == 0 else ("t" if d == 1 else f"t^{d}")
            if d == 0:
                text = str(abs(c))
            elif abs(c) == 1:
                text = body
            else:
                text = f"{abs(c)}*{body}"
            if not parts:
                parts.append(text if c > 0 else f"-{text}")
            else:
                parts.append(f" + {text}" if c > 0 else f" - {text}")
        return "".join(parts)

    def __repr__(self):
        return f"HilbertNumerator({self}, nvars={self.nvars})"


def hilbert_numerator(basis: GroebnerBasis) -> HilbertNumerator:
    return basis.hilbert_numerator()
