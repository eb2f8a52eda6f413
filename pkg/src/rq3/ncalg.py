"""Normal-ordering rewrite engine for the extended quantum Euclidean algebra.

Generators, in term order:

    alpha^{±1} < Lam^{±1} < r^{±1} < xz^{±1} < xm < xp
               < xim < xiz < xip < bxim < bxiz < bxip

``alpha`` is the free frame normalization: a formal unit that commutes
with everything and is fixed by the involution.  ``Lam`` is the
dilatator, ``r`` the radius, ``xm/xz/xp`` the coordinates x^-, x^0, x^+
(only x^0 is invertible), ``xi*`` the one-forms dx^i of the first
calculus and ``bxi*`` those of the second.

A normal monomial is

    alpha^a * Lam^l * r^b * xz^c * xm^d * xp^e * (xi word) * (bxi word)

with a, l, b, c integers, d, e naturals, and the form words strictly
ascending square-free subwords of xim xiz xip (resp. the barred ones).
With radius reduction on (the default) d*e = 0: mixed xm*xp pairs are
eliminated through r^2 = g_ij x^i x^j.  A ``Monomial`` is the plain
8-tuple (a, l, b, c, d, e, u, v) with u, v the form words as 3-bit
masks; an ``Element`` is a finite Scalar-linear combination of
monomials.

The rewrite system has one rule per out-of-order adjacent generator
pair.  Rules whose left member is a form generator and whose right
member is an inverse coordinate power are not postulated: they are
derived at build time by the sandwich construction (conjugate the direct
relation by the inverse and renormalize the tail).  The fast normalizer
works on structured monomials through merge tables, but the word-level
table is exposed (``RuleTable``) so that termination and local
confluence can be audited rule by rule.
"""

from __future__ import annotations

from . import rmat
from .qscalar import Scalar, ZERO, ONE, S, Q, H

__all__ = ["Algebra", "Element", "RuleTable", "ATOM_NAMES", "mono_degree",
           "mono_form_degree", "mono_to_atoms", "mono_str",
           "ALPHA", "ALPHAI", "LAM", "LAMI", "RAD", "RADI", "X0", "X0I",
           "XM", "XP", "XIM", "XIZ", "XIP", "BXIM", "BXIZ", "BXIP"]

(ALPHA, ALPHAI, LAM, LAMI, RAD, RADI, X0, X0I,
 XM, XP, XIM, XIZ, XIP, BXIM, BXIZ, BXIP) = range(16)

ATOM_NAMES = ("alpha", "alpha^-1", "Lam", "Lam^-1", "r", "r^-1", "xz", "xz^-1",
              "xm", "xp", "xim", "xiz", "xip", "bxim", "bxiz", "bxip")

# term-order slot of each atom (inverses share their generator's slot)
SLOT = (-1, -1, 0, 0, 1, 1, 2, 2, 3, 4, 5, 6, 7, 8, 9, 10)

_XATOM = (XM, X0, XP)          # coordinate index 0,1,2 -> atom
_XINDEX = {XM: 0, X0: 1, XP: 2}
_DEG = (-1, 0, 1)

EMPTY = (0, 0, 0, 0, 0, 0, 0, 0)


def _mask_letters(mask):
    return tuple(i for i in (0, 1, 2) if mask & (1 << i))


def _popcount(mask):
    return bin(mask).count("1")


def mono_degree(m):
    """Grading degree: deg(x^-, x^0, x^+) = (-1, 0, +1), forms likewise."""
    d = m[5] - m[4]
    for i in _mask_letters(m[6]):
        d += _DEG[i]
    for i in _mask_letters(m[7]):
        d += _DEG[i]
    return d


def mono_form_degree(m):
    return _popcount(m[6]) + _popcount(m[7])


def mono_to_atoms(m):
    a, l, b, c, d, e, u, v = m
    out = []
    for exp, pos, neg in ((a, ALPHA, ALPHAI), (l, LAM, LAMI), (b, RAD, RADI), (c, X0, X0I)):
        out.extend([pos if exp > 0 else neg] * abs(exp))
    out.extend([XM] * d)
    out.extend([XP] * e)
    out.extend(XIM + i for i in _mask_letters(u))
    out.extend(BXIM + i for i in _mask_letters(v))
    return tuple(out)


def mono_str(m):
    factors = []
    for exp, name in ((m[0], "alpha"), (m[1], "Lam"), (m[2], "r"), (m[3], "xz"),
                      (m[4], "xm"), (m[5], "xp")):
        if exp == 1:
            factors.append(name)
        elif exp:
            factors.append(f"{name}^{exp}")
    factors.extend(ATOM_NAMES[XIM + i] for i in _mask_letters(m[6]))
    factors.extend(ATOM_NAMES[BXIM + i] for i in _mask_letters(m[7]))
    return " * ".join(factors)


def _coeff_str(c):
    s = str(c)
    if "/" in s or "+" in s[1:] or "-" in s[1:]:
        return f"({s})"
    return s


class Element:
    """A finite Scalar-linear combination of normal monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return Element(self.alg, out)

    def __neg__(self):
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.alg.multiply(self, other)
        return self.scaled(other)

    def __rmul__(self, other):
        # Scalars commute with everything, so scaling from either side agrees.
        return self.scaled(other)

    def scaled(self, c):
        if not isinstance(c, Scalar):
            c = ONE * c
        if c.is_zero():
            return Element(self.alg, {})
        return Element(self.alg, {m: c * x for m, x in self.terms.items()})

    def star(self):
        return self.alg.involution(self)

    def degree(self):
        degs = {mono_degree(m) for m in self.terms}
        if len(degs) != 1:
            raise ValueError("element is not grade-homogeneous")
        return degs.pop()

    def form_degree(self):
        degs = {mono_form_degree(m) for m in self.terms}
        if len(degs) != 1:
            raise ValueError("element is not form-homogeneous")
        return degs.pop()

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            ms = mono_str(m)
            if not ms:
                parts.append(_coeff_str(c))
            elif c == ONE:
                parts.append(ms)
            elif c == -ONE:
                parts.append("-" + ms)
            else:
                parts.append(f"{_coeff_str(c)} * {ms}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    __repr__ = __str__


class RuleTable:
    """Word-level view of the rewrite system: one rule per reducible pair.

    ``lookup(a, b)`` gives the rewrite of the two-letter word (a, b) as
    (Scalar, replacement word) pairs, or None when the word is already
    normal.  The table is assembled from the same merge data the fast
    normalizer uses, so auditing the table audits the engine.
    """

    def __init__(self, alg):
        self.alg = alg
        self._rules = {}
        for a in range(16):
            for b in range(16):
                r = self._build(a, b)
                if r is not None:
                    self._rules[(a, b)] = tuple(r)

    def lookup(self, a, b):
        return self._rules.get((a, b))

    def pairs(self):
        return sorted(self._rules)

    def __len__(self):
        return len(self._rules)

    def _build(self, a, b):
        alg = self.alg
        qp = alg.qpow
        if (a, b) in ((ALPHA, ALPHAI), (ALPHAI, ALPHA), (LAM, LAMI), (LAMI, LAM),
                      (RAD, RADI), (RADI, RAD), (X0, X0I), (X0I, X0)):
            return [(ONE, ())]
        if b in (ALPHA, ALPHAI):
            return None if a in (ALPHA, ALPHAI) else [(ONE, (b, a))]
        if a in (ALPHA, ALPHAI):
            return None
        if b in (LAM, LAMI):
            if SLOT[a] == 0:
                return None
            w = alg.lam_weight(a)
            return [(qp(w if b == LAM else -w), (b, a))]
        if b in (RAD, RADI):
            if SLOT[a] <= 1:
                return None
            if a in (X0, X0I, XM, XP):
                return [(ONE, (b, a))]
            w = 1 if a >= BXIM else -1
            return [(qp(w if b == RAD else -w), (b, a))]
        if a in (LAM, LAMI, RAD, RADI):
            return None
        if b in (X0, X0I):
            sign = 1 if b == X0 else -1
            if a == XM:
                return [(qp(sign), (b, a))]
            if a == XP:
                return [(qp(-sign), (b, a))]
            if XIM <= a:
                bar = a >= BXIM
                base = BXIM if bar else XIM
                if b == X0:
                    tab = alg.bxi_past_x if bar else alg.xi_past_x
                    return [(c, (_XATOM[i], base + j)) for c, i, j in tab[(a - base, 1)]]
                tab = alg.bxi_past_x0i if bar else alg.xi_past_x0i
                return [(c, xw + (base + j,)) for c, xw, j in tab[a - base]]
            return None
        if b in (XM, XP):
            if a == XP and b == XM:
                return [(ONE, (XM, XP)), (H, (X0, X0))]
            if a == XM and b == XP:
                if not alg.radius_reduction:
                    return None
                return [(alg.red, (RAD, RAD)), (-Q * alg.red, (X0, X0))]
            if XIM <= a:
                bar = a >= BXIM
                base = BXIM if bar else XIM
                tab = alg.bxi_past_x if bar else alg.xi_past_x
                return [(c, (_XATOM[i], base + j)) for c, i, j in tab[(a - base, _XINDEX[b])]]
            return None
        if XIM <= b <= XIP:
            if a >= BXIM:
                return [(c, (XIM + i, BXIM + j))
                        for c, i, j in alg.bxi_xi_cross[(a - BXIM, b - XIM)]]
            if XIM <= a:
                return self._form_pair(a - XIM, b - XIM, XIM)
            return None
        if b >= BXIM and a >= BXIM:
            return self._form_pair(a - BXIM, b - BXIM, BXIM)
        return None

    def _form_pair(self, ka, kb, base):
        if ka < kb:
            return None
        if ka == kb:
            if ka == 1:
                return [(H, (base, base + 2))]
            return []                           # square of xi^± vanishes
        coef = -ONE if (ka, kb) == (2, 0) else -Q
        return [(coef, (base + kb, base + ka))]


class Algebra:
    """The extended algebra with its rewrite tables.

    Options: ``radius_reduction`` eliminates mixed xm*xp monomials through
    the invariant length (all of the geometry needs it on);
    ``xi_lambda_commute`` selects the alternative dilatator relation
    Lam xi = xi Lam instead of the default xi Lam = q Lam xi.
    """

    def __init__(self, radius_reduction=True, xi_lambda_commute=False):
        self.radius_reduction = radius_reduction
        self.xi_lambda_commute = xi_lambda_commute
        self.rm = rmat.constants()
        self.red = (S + S.inv()).inv()
        self._qp = {}
        r, ri = self.rm.rhat, self.rm.rhat_inv
        qi = Q.inv()
        self.xi_past_x = self._pair_table(lambda k, l, i, j: qi * ri.entry(k, l, i, j))
        self.bxi_past_x = self._pair_table(lambda k, l, i, j: Q * r.entry(k, l, i, j))
        self.bxi_xi_cross = self._pair_table(lambda k, l, i, j: -Q * r.entry(k, l, i, j))
        self._append = {}
        for mask in range(8):
            for k in (0, 1, 2):
                out = {}
                for c, w in self._ins(_mask_letters(mask), k):
                    mk = 0
                    for i in w:
                        mk |= 1 << i
                    out[mk] = out.get(mk, ZERO) + c
                self._append[(mask, k)] = tuple((c, mk) for mk, c in out.items()
                                                if not c.is_zero())
        self._mta = {}
        self._shift = {}
        self._push = {}
        self._cross = {}
        self._xz1 = {}
        self.xi_past_x0i = self._derive_x0i(bar=False)
        self.bxi_past_x0i = self._derive_x0i(bar=True)
        self.rules = RuleTable(self)

    # -- scalar helpers --------------------------------------------------------

    def qpow(self, n):
        c = self._qp.get(n)
        if c is None:
            c = self._qp[n] = Scalar.s_power(2 * n)
        return c

    def lam_weight(self, atom):
        """Exponent of q picked up when this atom crosses Lam leftward."""
        if atom in (ALPHA, ALPHAI, LAM, LAMI):
            return 0
        if XIM <= atom and self.xi_lambda_commute:
            return 0
        return -1 if atom in (RADI, X0I) else 1

    # -- table construction ------------------------------------------------------

    @staticmethod
    def _pair_table(entry):
        out = {}
        for k in range(3):
            for l in range(3):
                terms = []
                for i in range(3):
                    for j in range(3):
                        c = entry(k, l, i, j)
                        if not c.is_zero():
                            terms.append((c, i, j))
                out[(k, l)] = tuple(terms)
        return out

    def _derive_x0i(self, bar):
        """Sandwich rules xi^k xz^-1 -> sum of (Scalar, x-word, xi^j).

        Conjugate the direct relation for xz xi^k by xz^-1 on both sides
        and renormalize the tail; dependencies on already-derived rules of
        the same family are resolved with a worklist.
        """
        base = BXIM if bar else XIM
        if bar:
            rel = {k: [(qi_c, kp, lp) for kp in range(3) for lp in range(3)
                       if not (qi_c := Q.inv() * self.rm.rhat_inv.entry(1, k, kp, lp)).is_zero()]
                   for k in range(3)}
            past_x = self.bxi_past_x
        else:
            rel = {k: [(q_c, kp, lp) for kp in range(3) for lp in range(3)
                       if not (q_c := Q * self.rm.rhat.entry(1, k, kp, lp)).is_zero()]
                   for k in range(3)}
            past_x = self.xi_past_x
        table = {}
        pending = {0, 1, 2}
        while pending:
            progressed = False
            for k in sorted(pending):
                if any(lp != 1 and kp not in table for _, kp, lp in rel[k]):
                    continue
                el = self.zero()
                for c, kp, lp in rel[k]:
                    if lp == 1:
                        el = el + self.normalize_word((X0I, base + kp), c)
                        continue
                    # x^lp xz^-1 = q^{-+1} xz^-1 x^lp
                    c2 = c * self.qpow(-1 if lp == 0 else 1)
                    for c3, xw, j in table[kp]:
                        for c4, i2, j2 in past_x[(j, lp)]:
                            el = el + self.normalize_word(
                                (X0I,) + xw + (_XATOM[i2], base + j2), c2 * c3 * c4)
                rule = []
                for m, c in el.terms.items():
                    atoms = mono_to_atoms(m)
                    rule.append((c, atoms[:-1], atoms[-1] - base))
                table[k] = tuple(rule)
                pending.discard(k)
                progressed = True
            if not progressed:
                raise ArithmeticError("sandwich derivation did not converge")
        return table

    def _ins(self, word, k):
        """Insert one form letter at the right end of an ordered form word."""
        if not word or word[-1] < k:
            return [(ONE, word + (k,))]
        last = word[-1]
        if last == k:
            if k != 1:
                return []
            out = []
            for c1, w1 in self._ins(word[:-1], 0):
                for c2, w2 in self._ins(w1, 2):
                    out.append((H * c1 * c2, w2))
            return out
        coef = -ONE if (last, k) == (2, 0) else -Q
        out = []
        for c1, w1 in self._ins(word[:-1], k):
            for c2, w2 in self._ins(w1, last):
                out.append((coef * c1 * c2, w2))
        return out

    # -- the merge machinery -------------------------------------------------

    def _shift_one(self, w, xword):
        """Move one form letter right past an x-word: w.xw = sum c xw' w'."""
        key = (w, xword)
        hit = self._shift.get(key)
        if hit is not None:
            return hit
        if not xword:
            out = ((ONE, (), w),)
        else:
            head, rest = xword[0], xword[1:]
            bar = w >= BXIM
            base = BXIM if bar else XIM
            k = w - base
            pieces = []
            if head in (RAD, RADI):
                sign = (1 if bar else -1) * (1 if head == RAD else -1)
                pieces.append((self.qpow(sign), (head,), w))
            elif head == X0I:
                tab = self.bxi_past_x0i if bar else self.xi_past_x0i
                for c, xw, j in tab[k]:
                    pieces.append((c, xw, base + j))
            elif head in (X0, XM, XP):
                tab = self.bxi_past_x if bar else self.xi_past_x
                for c, i, j in tab[(k, _XINDEX[head])]:
                    pieces.append((c, (_XATOM[i],), base + j))
            else:
                raise AssertionError(f"unexpected atom {head} in x-word")
            acc = []
            for c, xw, w1 in pieces:
                for c2, xw2, w2 in self._shift_one(w1, rest):
                    acc.append((c * c2, xw + xw2, w2))
            out = tuple(acc)
        self._shift[key] = out
        return out

    def _push_forms(self, formword, xword):
        """Move an x-word left past a form word: fw.xw = sum c xw' fw'."""
        key = (formword, xword)
        hit = self._push.get(key)
        if hit is not None:
            return hit
        if not formword:
            out = ((ONE, xword, ()),)
        else:
            acc = []
            for c, xw1, w1 in self._shift_one(formword[-1], xword):
                for c2, xw2, fw2 in self._push_forms(formword[:-1], xw1):
                    acc.append((c * c2, xw2, fw2 + (w1,)))
            out = tuple(acc)
        self._push[key] = out
        return out

    def _cross_bars(self, vword, k):
        """Move xi^k left past a bxi word: vw.xi^k = sum c xi^k' vw'."""
        key = (vword, k)
        hit = self._cross.get(key)
        if hit is not None:
            return hit
        if not vword:
            out = ((ONE, k, ()),)
        else:
            acc = []
            for c, i, j in self.bxi_xi_cross[(vword[-1], k)]:
                for c2, k2, vw2 in self._cross_bars(vword[:-1], i):
                    acc.append((c * c2, k2, vw2 + (j,)))
            out = tuple(acc)
        self._cross[key] = out
        return out

    def _xz_atom(self, atom, d, e):
        """Merge one x (or r) atom into the tail xm^d xp^e of the x zone.

        Returns (Scalar, drr, dx0, d', e') tuples; the r and xz exponent
        shifts are additive, the xm/xp exponents are replaced.
        """
        key = (atom, d, e)
        hit = self._xz1.get(key)
        if hit is not None:
            return hit
        if atom in (RAD, RADI):
            out = ((ONE, 1 if atom == RAD else -1, 0, d, e),)
        elif atom in (X0, X0I):
            sign = 1 if atom == X0 else -1
            out = ((self.qpow(sign * (d - e)), 0, sign, d, e),)
        elif atom == XP:
            out = tuple(self._reduce_pairs(ONE, 0, 0, d, e + 1))
        elif atom == XM:
            out = tuple(self._feed_xm(d, e))
        else:
            raise AssertionError(f"unexpected atom {atom} in x zone")
        self._xz1[key] = out
        return out

    def _reduce_pairs(self, c, drr, dx0, d, e):
        if not self.radius_reduction or d == 0 or e == 0:
            return [(c, drr, dx0, d, e)]
        out = []
        out.extend(self._reduce_pairs(c * self.red, drr + 2, dx0, d - 1, e - 1))
        out.extend(self._reduce_pairs(c * -Q * self.red * self.qpow(2 * (d - 1)),
                                      drr, dx0 + 2, d - 1, e - 1))
        return out

    def _feed_xm(self, d, e):
        if e == 0:
            return [(ONE, 0, 0, d + 1, 0)]
        out = []
        for c, drr, dx0, d1, e1 in self._feed_xm(d, e - 1):
            for c2, drr2, dx02, d2, e2 in self._reduce_pairs(ONE, 0, 0, d1, e1 + 1):
                out.append((c * c2, drr + drr2, dx0 + dx02, d2, e2))
        # h-branch of xp.xm = xm.xp + h xz.xz; the two xz cross xm^d xp^(e-1)
        out.append((H * self.qpow(2 * (d - e + 1)), 0, 2, d, e - 1))
        return out

    def mono_times_atom(self, m, g):
        key = (m, g)
        hit = self._mta.get(key)
        if hit is not None:
            return hit
        a, l, b, c, d, e, u, v = m
        nu, nv = _popcount(u), _popcount(v)
        if g in (ALPHA, ALPHAI):
            out = ((ONE, (a + (1 if g == ALPHA else -1), l, b, c, d, e, u, v)),)
        elif g in (LAM, LAMI):
            w = b + c + d + e + (0 if self.xi_lambda_commute else nu + nv)
            sign = 1 if g == LAM else -1
            out = ((self.qpow(sign * w), (a, l + sign, b, c, d, e, u, v)),)
        elif g in (RAD, RADI):
            sign = 1 if g == RAD else -1
            out = ((self.qpow(sign * (nv - nu)), (a, l, b + sign, c, d, e, u, v)),)
        elif g in (X0, X0I, XM, XP):
            fw = tuple(XIM + i for i in _mask_letters(u)) + \
                tuple(BXIM + i for i in _mask_letters(v))
            acc = {}
            for c1, xw, fw2 in self._push_forms(fw, (g,)):
                for c2, drr, dx0, d2, e2 in self._xz_words(d, e, xw):
                    for c3, u2, v2 in self._mask_rebuild(fw2):
                        mono = (a, l, b + drr, c + dx0, d2, e2, u2, v2)
                        cc = c1 * c2 * c3
                        prev = acc.get(mono)
                        acc[mono] = cc if prev is None else prev + cc
            out = tuple((cc, mono) for mono, cc in acc.items() if not cc.is_zero())
        elif XIM <= g <= XIP:
            acc = {}
            for c1, k2, vw2 in self._cross_bars(_mask_letters(v), g - XIM):
                for c2, u2 in self._append[(u, k2)]:
                    for c3, v2 in self._mask_word(vw2):
                        mono = (a, l, b, c, d, e, u2, v2)
                        cc = c1 * c2 * c3
                        prev = acc.get(mono)
                        acc[mono] = cc if prev is None else prev + cc
            out = tuple((cc, mono) for mono, cc in acc.items() if not cc.is_zero())
        else:
            out = tuple((c2, (a, l, b, c, d, e, u, v2))
                        for c2, v2 in self._append[(v, g - BXIM)])
        self._mta[key] = out
        return out

    def _xz_words(self, d, e, xword):
        terms = [(ONE, 0, 0, d, e)]
        for atom in xword:
            nxt = []
            for c, drr, dx0, d1, e1 in terms:
                for c2, drr2, dx02, d2, e2 in self._xz_atom(atom, d1, e1):
                    nxt.append((c * c2, drr + drr2, dx0 + dx02, d2, e2))
            terms = nxt
        return terms

    def _mask_rebuild(self, formword):
        """Feed a mixed form word (all xi before all bxi) into fresh masks."""
        terms = [(ONE, 0, 0)]
        for w in formword:
            bar = w >= BXIM
            k = w - (BXIM if bar else XIM)
            nxt = []
            for c, u, v in terms:
                for c2, m2 in self._append[((v if bar else u), k)]:
                    nxt.append((c * c2, u if bar else m2, m2 if bar else v))
            terms = nxt
        return terms

    def _mask_word(self, letters):
        terms = [(ONE, 0)]
        for k in letters:
            nxt = []
            for c, v in terms:
                for c2, v2 in self._append[(v, k)]:
                    nxt.append((c * c2, v2))
            terms = nxt
        return terms

    # -- public algebra operations ------------------------------------------

    def zero(self):
        return Element(self, {})

    def scalar(self, c):
        if not isinstance(c, Scalar):
            c = ONE * c
        return Element(self, {} if c.is_zero() else {EMPTY: c})

    def one(self):
        return self.scalar(ONE)

    def gen(self, atom, power=1):
        inv = {ALPHA: ALPHAI, LAM: LAMI, RAD: RADI, X0: X0I}
        g = atom if power >= 0 else inv[atom]
        return self.normalize_word((g,) * abs(power))

    def x(self, i):
        return self.normalize_word((_XATOM[i],))

    def xi(self, i):
        return self.normalize_word((XIM + i,))

    def bxi(self, i):
        return self.normalize_word((BXIM + i,))

    def element(self, terms):
        return Element(self, {m: c for m, c in terms.items() if not c.is_zero()})

    def element_times_atom(self, el, g):
        out = {}
        for m, c in el.terms.items():
            for c2, m2 in self.mono_times_atom(m, g):
                cc = c * c2
                prev = out.get(m2)
                cc = cc if prev is None else prev + cc
                if cc.is_zero():
                    out.pop(m2, None)
                else:
                    out[m2] = cc
        return Element(self, out)

    def normalize_word(self, atoms, coeff=ONE):
        """Normal form of an arbitrary word of generators times a Scalar."""
        el = self.scalar(coeff)
        for g in atoms:
            el = self.element_times_atom(el, g)
        return el

    def multiply(self, a, b):
        out = {}
        for m2, c2 in b.terms.items():
            el = a
            for g in mono_to_atoms(m2):
                el = self.element_times_atom(el, g)
            for m, c in el.terms.items():
                cc = c * c2
                prev = out.get(m)
                cc = cc if prev is None else prev + cc
                if cc.is_zero():
                    out.pop(m, None)
                else:
                    out[m] = cc
        return Element(self, out)

    def commutator(self, a, b):
        return a * b - b * a

    def involution(self, a):
        """The antilinear anti-automorphism * of the extended algebra."""
        out = self.zero()
        for m, c in a.terms.items():
            coeff = c
            word = []
            for g in reversed(mono_to_atoms(m)):
                sc, g2 = _STAR[g]
                if sc is not None:
                    coeff = coeff * sc
                word.append(g2)
            out = out + self.normalize_word(word, coeff)
        return out

    def grade_split(self, a):
        """Split into homogeneous components keyed by (degree, form degree)."""
        comps = {}
        for m, c in a.terms.items():
            key = (mono_degree(m), mono_form_degree(m))
            comps.setdefault(key, {})[m] = c
        return {k: Element(self, t) for k, t in sorted(comps.items())}

    def substitute_alpha(self, a, value):
        """Evaluate the formal normalization alpha at a nonzero Scalar."""
        if not isinstance(value, Scalar):
            value = ONE * value
        if value.is_zero():
            raise ZeroDivisionError("alpha must be invertible")
        out = {}
        for m, c in a.terms.items():
            m2 = (0,) + m[1:]
            cc = c * value ** m[0]
            prev = out.get(m2)
            cc = cc if prev is None else prev + cc
            if cc.is_zero():
                out.pop(m2, None)
            else:
                out[m2] = cc
        return Element(self, out)

    # -- diagnostics ----------------------------------------------------------

    def check_local_confluence(self):
        """Join every critical pair of the rule table; returns (count, bad)."""
        rt = self.rules
        reducible = set(rt.pairs())
        checked = 0
        bad = []
        for a, b in reducible:
            for c in range(16):
                if (b, c) not in reducible:
                    continue
                checked += 1
                left = self.zero()
                for coef, word in rt.lookup(a, b):
                    left = left + self.normalize_word(word + (c,), coef)
                right = self.zero()
                for coef, word in rt.lookup(b, c):
                    right = right + self.normalize_word((a,) + word, coef)
                direct = self.normalize_word((a, b, c))
                if left != right or left != direct:
                    bad.append((a, b, c))
        return checked, bad

    def random_monomial(self, rng, max_degree=6):
        """A random normal monomial with at most max_degree letters."""
        expo = [0, 0, 0, 0, 0, 0, 0, 0]
        for _ in range(rng.randint(0, max_degree)):
            slot = rng.randint(1, 7)
            if slot <= 3:
                expo[slot] += rng.choice((1, -1))
            elif slot <= 5:
                expo[slot] += 1
            else:
                expo[slot] |= 1 << rng.randint(0, 2)
        if self.radius_reduction and expo[4] and expo[5]:
            expo[5] = 0
        return tuple(expo)


# involution of single atoms: atom -> (Scalar factor or None, atom)
_STAR = {
    ALPHA: (None, ALPHA), ALPHAI: (None, ALPHAI),
    LAM: (None, LAMI), LAMI: (None, LAM),
    RAD: (None, RAD), RADI: (None, RADI),
    X0: (None, X0), X0I: (None, X0I),
    XM: (S, XP), XP: (S.inv(), XM),
    XIM: (S, BXIP), XIZ: (None, BXIZ), XIP: (S.inv(), BXIM),
    BXIM: (S, XIP), BXIZ: (None, XIZ), BXIP: (S.inv(), XIM),
}
