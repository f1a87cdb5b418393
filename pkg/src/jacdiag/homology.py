"""Torsion and linking data of surgery presentations, plus Kirby moves.

A linking matrix is a symmetric integer matrix B.  Its cokernel carries the
first-homology data: invariant factors from the Smith normal form, the
linking pairing x~^T B^{-1} y~ mod 1 on torsion generators, and (when the
group has odd order, or for the dedicated lens-space constructor) a quadratic
refinement.  Everything is exact rational arithmetic on plain lists.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction


class ArgumentError(ValueError):
    pass


class UnsupportedError(ValueError):
    pass


# --- integer matrix helpers ---------------------------------------------------

def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)]
            for i in range(n)]


def mat_det(a):
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(a)
    m = [row[:] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = Fraction(1, m[c][c])
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    if det.denominator != 1:
        raise AssertionError("integer determinant came out fractional")
    return int(det)


def mat_inverse(a):
    """Exact inverse over the rationals."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise UnsupportedError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        inv = Fraction(1) / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def check_symmetric(b):
    n = len(b)
    for row in b:
        if len(row) != n:
            raise ArgumentError("matrix is not square")
    for i in range(n):
        for j in range(n):
            if b[i][j] != b[j][i]:
                raise ArgumentError("linking matrix must be symmetric")


def smith_normal_form(b):
    """Deterministic SNF: returns (U, D, V) with U*B*V = D.

    Pivot rule: smallest absolute nonzero entry, row-major tie break.  The
    diagonal is nonnegative and satisfies the divisibility chain.
    """
    n_rows = len(b)
    n_cols = len(b[0]) if b else 0
    d = [row[:] for row in b]
    u = _identity(n_rows)
    v = _identity(n_cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, f):
        for row in d:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(n_rows, n_cols):
        # pivot: smallest |entry| != 0 in the remaining block, row-major ties
        piv = None
        best = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                x = abs(d[i][j])
                if x and (best is None or x < best):
                    best, piv = x, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        while True:
            # gcd sweep: clear column and row t
            dirty = True
            while dirty:
                dirty = False
                for i in range(t + 1, n_rows):
                    if d[i][t]:
                        add_row(t, i, -(d[i][t] // d[t][t]))
                        if d[i][t]:
                            swap_rows(t, i)
                            dirty = True
                for j in range(t + 1, n_cols):
                    if d[t][j]:
                        add_col(t, j, -(d[t][j] // d[t][t]))
                        if d[t][j]:
                            swap_cols(t, j)
                            dirty = True
            # the pivot must divide the whole remaining block
            offender = None
            for i in range(t + 1, n_rows):
                for j in range(t + 1, n_cols):
                    if d[i][j] % d[t][t] != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(offender, t, 1)
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v


def snf_diagonal(b):
    _, d, _ = smith_normal_form(b)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


# --- torsion data -------------------------------------------------------------

@dataclass
class TorsionData:
    invariant_factors: list          # d_1 | d_2 | ..., each > 1
    free_rank: int
    bilinear_gen: list | None        # Fractions mod 1 on torsion generators
    qform_fn: object = None          # callable element-tuple -> Fraction mod 1
    label: str = ""

    def canonical_cyclic_profile(self):
        """Refinement values in canonical coordinates of a cyclic group.

        The residue presentation of a cyclic (G, q) depends on the choice of
        generator, which is an artifact of the matrix reduction, not of the
        isomorphism class.  Weight-system evaluations must not see that
        choice, so they read q through the generator whose value sequence
        (q(g), q(2g), ..., q((n-1)g)) is lexicographically minimal.  The
        result is a list L with L[k] = q(k * g_min); isomorphic pairs give
        identical lists.
        """
        if not self.is_cyclic() or self.free_rank:
            raise UnsupportedError("canonical profile needs a cyclic group")
        if not self.has_qform():
            raise UnsupportedError("canonical profile needs a refinement")
        cached = getattr(self, "_profile_cache", None)
        if cached is not None:
            return cached
        n = self.order()
        if n == 1:
            profile = [Fraction(0)]
        else:
            qv = [self.qform((k,)) for k in range(n)]
            best = None
            for c in range(1, n):
                if math.gcd(c, n) != 1:
                    continue
                if best is None:
                    best = c
                    continue
                # lazy lexicographic comparison against the current best
                a = b = 0
                for _ in range(n - 1):
                    a = (a + c) % n
                    b = (b + best) % n
                    if qv[a] != qv[b]:
                        if qv[a] < qv[b]:
                            best = c
                        break
            profile = [qv[(best * k) % n] for k in range(n)]
        object.__setattr__(self, "_profile_cache", profile)
        return profile

    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def has_qform(self) -> bool:
        return self.qform_fn is not None

    def elements(self):
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def neg(self, g):
        return tuple((-x) % d for x, d in zip(g, self.invariant_factors))

    def add(self, g, h):
        return tuple((x + y) % d
                     for x, y, d in zip(g, h, self.invariant_factors))

    def bilinear(self, g, h) -> Fraction:
        if self.bilinear_gen is None:
            raise UnsupportedError("no linking form on this group")
        tot = Fraction(0)
        for i, x in enumerate(g):
            for j, y in enumerate(h):
                tot += x * y * self.bilinear_gen[i][j]
        return tot % 1

    def qform(self, g) -> Fraction:
        if self.qform_fn is None:
            raise UnsupportedError("no quadratic refinement available")
        return self.qform_fn(tuple(g)) % 1


def _element_order(g, factors):
    out = 1
    for x, d in zip(g, factors):
        if x:
            out = out * (d // math.gcd(d, x)) // math.gcd(out, d // math.gcd(d, x))
    return out


def torsion_data_from_matrix(b, want_qform: bool = True) -> TorsionData:
    """Cokernel data of a symmetric integer matrix.

    The linking pairing needs det(B) != 0; the derived quadratic refinement
    additionally needs the torsion group to have odd order (the halving step
    is not determined by the pairing on even groups).
    """
    check_symmetric(b)
    n = len(b)
    u, d, v = smith_normal_form(b)
    diag = [d[i][i] for i in range(n)]
    factors = [x for x in diag if x not in (0, 1)]
    free_rank = sum(1 for x in diag if x == 0)
    bilinear_gen = None
    qfn = None
    if free_rank == 0 and n > 0:
        binv = mat_inverse(b)
        uinv = mat_inverse(u)
        # torsion generator i corresponds to column of U^{-1} at the slot of
        # the invariant factor d_i
        slots = [i for i in range(n) if diag[i] not in (0, 1)]
        lifts = [[uinv[r][s] for r in range(n)] for s in slots]
        k = len(lifts)
        bilinear_gen = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                tot = Fraction(0)
                for r in range(n):
                    for c in range(n):
                        tot += Fraction(lifts[i][r]) * binv[r][c] * lifts[j][c]
                bilinear_gen[i][j] = tot % 1
        order = 1
        for f in factors:
            order *= f
        if want_qform and order % 2 == 1:
            def qfn(g, _factors=tuple(factors), _bg=bilinear_gen):
                tot = Fraction(0)
                for i, x in enumerate(g):
                    for j, y in enumerate(g):
                        tot += x * y * _bg[i][j]
                tot = tot % 1
                den = tot.denominator
                inv2 = pow(2, -1, den) if den > 1 else 0
                return (tot * inv2) % 1
    elif free_rank == 0 and n == 0:
        bilinear_gen = []
        qfn = lambda g: Fraction(0)
    td = TorsionData(factors, free_rank, bilinear_gen, qfn,
                     label=f"coker({n}x{n})")
    return td


def lens_torsion_data(p: int, q: int) -> TorsionData:
    """Z/p with pairing q*a*b/p and refinement q*g^2/(2p).

    g^2 is only well-defined mod 2p once a representative convention is
    fixed.  For even p the least nonnegative residue works as written; for
    odd p it breaks both the polarization identity and q(-g) = q(g), so the
    canonical even representative mod 2p is used instead (this is the unique
    symmetric refinement, and it coincides with the halved pairing derived
    from a linking matrix presentation).
    """
    if p < 1:
        raise ArgumentError("p must be positive")
    if math.gcd(p, q) != 1:
        raise ArgumentError("p and q must be coprime")
    if p == 1:
        return TorsionData([], 0, [], lambda g: Fraction(0), label="lens(1,1)")
    bilinear = [[Fraction(q, p) % 1]]

    def qfn(g):
        x = g[0] % p
        if p % 2 == 1 and x % 2 == 1:
            x += p
        return Fraction(q * x * x, 2 * p) % 1

    return TorsionData([p], 0, bilinear, qfn, label=f"lens({p},{q})")


def user_qform(td: TorsionData, table: dict) -> TorsionData:
    """Attach an explicitly supplied refinement (element tuple -> Fraction)."""
    table = {tuple(k): Fraction(v) % 1 for k, v in table.items()}

    def qfn(g):
        try:
            return table[tuple(g)]
        except KeyError:
            raise UnsupportedError(f"qform not supplied for element {g}")

    return TorsionData(td.invariant_factors, td.free_rank, td.bilinear_gen,
                       qfn, label=td.label + "+user-qform")


def lens_chain_matrix(p: int, q: int):
    """Tridiagonal surgery-chain matrix for the p/q lens space.

    Built from the negative continued fraction p/q = a1 - 1/(a2 - ...) with
    all a_i >= 2; the cokernel is cyclic of order p.  Used as a multi-row
    presentation of the same homology data for move-invariance fuzzing.
    """
    if p < 1 or math.gcd(p, q) != 1:
        raise ArgumentError("need p >= 1 and gcd(p, q) = 1")
    q %= p
    if p == 1:
        return [[1]]
    if q == 0:
        raise ArgumentError("q must be nonzero mod p")
    coeffs = []
    num, den = p, q
    while den:
        a = -(-num // den)          # ceil
        coeffs.append(a)
        num, den = den, a * den - num
    n = len(coeffs)
    m = [[0] * n for _ in range(n)]
    for i, a in enumerate(coeffs):
        m[i][i] = a
        if i + 1 < n:
            m[i][i + 1] = 1
            m[i + 1][i] = 1
    return m


# --- Kirby moves --------------------------------------------------------------

def kirby_stabilize(b, sign: int):
    if sign not in (1, -1):
        raise ArgumentError("stabilization sign must be +-1")
    check_symmetric(b)
    n = len(b)
    out = [row[:] + [0] for row in b]
    out.append([0] * n + [sign])
    return out


def kirby_slide(b, i: int, j: int, sign: int):
    """B -> E^T B E with E = I + sign * E_ij (add column i to column j)."""
    check_symmetric(b)
    n = len(b)
    if i == j:
        raise ArgumentError("slide needs distinct indices")
    if not (0 <= i < n and 0 <= j < n):
        raise ArgumentError("slide index out of range")
    if sign not in (1, -1):
        raise ArgumentError("slide sign must be +-1")
    e = _identity(n)
    e[i][j] = sign
    et = [[e[r][c] for r in range(n)] for c in range(n)]
    return mat_mul(mat_mul(et, b), e)


def random_kirby_sequence(b, rng, length: int):
    """Apply a seeded random sequence of stabilizations and slides."""
    cur = [row[:] for row in b]
    moves = []
    for _ in range(length):
        n = len(cur)
        if n < 2 or rng.random() < 0.3:
            s = rng.choice((1, -1))
            cur = kirby_stabilize(cur, s)
            moves.append(("stabilize", s))
        else:
            i = rng.randrange(n)
            j = rng.randrange(n)
            while j == i:
                j = rng.randrange(n)
            s = rng.choice((1, -1))
            cur = kirby_slide(cur, i, j, s)
            moves.append(("slide", i, j, s))
    return cur, moves


# --- equivalence of (group, form) pairs ----------------------------------------

def _span_size(images, factors):
    seen = {tuple(0 for _ in factors)}
    frontier = [tuple(0 for _ in factors)]
    while frontier:
        g = frontier.pop()
        for im in images:
            h = tuple((x + y) % d for x, y, d in zip(g, im, factors))
            if h not in seen:
                seen.add(h)
                frontier.append(h)
    return len(seen)


def torsion_pair_equivalent(a: TorsionData, b: TorsionData,
                            bound: int = 5000) -> bool:
    """Exhaustive search for an isomorphism matching pairing and refinement.

    Both sides must carry the same optional structure: the pairing is always
    compared; refinements are compared when both sides have one, and their
    presence must agree.
    """
    if a.free_rank != b.free_rank:
        return False
    if a.invariant_factors != b.invariant_factors:
        return False
    if a.has_qform() != b.has_qform():
        raise UnsupportedError("refinement present on one side only")
    order = a.order()
    if order > bound:
        raise UnsupportedError(f"group order {order} exceeds bound {bound}")
    factors = a.invariant_factors
    k = len(factors)
    if k == 0:
        return True
    use_q = a.has_qform()

    if k == 1:
        # cyclic fast path: an isomorphism is g -> c*g for a unit c
        n = factors[0]
        qa = [a.qform((x,)) for x in range(n)] if use_q else None
        qb = [b.qform((x,)) for x in range(n)] if use_q else None
        ba = a.bilinear((1,), (1,))
        for c in range(1, n):
            if math.gcd(c, n) != 1:
                continue
            if b.bilinear((c,), (c,)) != ba:
                continue
            if use_q:
                x = 0
                good = True
                for g in range(1, n):
                    x = (x + c) % n
                    if qa[g] != qb[x]:
                        good = False
                        break
                if not good:
                    continue
            return True
        return False

    gens_a = [tuple(1 if t == i else 0 for t in range(k)) for i in range(k)]
    elements = list(b.elements())
    cands = [[g for g in elements
              if _element_order(g, factors) == factors[i]] for i in range(k)]
    for images in itertools.product(*cands):
        if _span_size(images, factors) != order:
            continue
        ok = True
        for i in range(k):
            for j in range(k):
                if a.bilinear(gens_a[i], gens_a[j]) != \
                        b.bilinear(images[i], images[j]):
                    ok = False
                    break
            if not ok:
                break
        if ok and use_q:
            # the refinement is quadratic, not linear: generator values do
            # not determine it, so compare on every element via the hom
            for g in a.elements():
                img = tuple(0 for _ in factors)
                for x, im in zip(g, images):
                    img = tuple((u + x * v) % d
                                for u, v, d in zip(img, im, factors))
                if a.qform(g) != b.qform(img):
                    ok = False
                    break
        if ok:
            return True
    return False
