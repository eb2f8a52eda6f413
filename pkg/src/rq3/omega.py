"""Differential forms, tensor products, generalized permutations, metric.

Both exterior differentials are graded commutators with the invariant
one-forms

    theta    = (q-1)^-1 q^2  r^-2 eta,       eta    = g_ij x^i xi^j,
    thetabar = (1/q-1)^-1 q^-2 r^-2 etabar,  etabar = g_ij x^i bxi^j,

so d(x^i) = xi^i is a computation, not a definition.

A rank-k tensor over the one-form bimodule is stored as a map
(slot_1, ..., slot_k) -> coefficient with all coefficients pulled to the
left through the bimodule relations; slots 0..2 are xi^-, xi^0, xi^+ and
3..5 the barred ones.  The generalized permutation sigma acts on slot
pairs through numerical 9x9 matrices.  On the pure sectors these are the
connection's S (one of q*Rhat, (q*Rhat)^-1); on the mixed sectors they
are fixed to (q*Rhat)^-1 and q*Rhat, the unique values for which
pi o (sigma + 1) = 0 holds against the cross relations.  (In the frame
basis the same map has matrices q*Rhat^-1 and q^-1*Rhat; the dilatator
content of the frames shifts the power of q between the two bases.)
"""

from __future__ import annotations

from . import rmat
from .ncalg import (Algebra, Element, mono_form_degree, _mask_letters,
                    XIM, BXIM, RADI, X0I)
from .qscalar import Scalar, ZERO, ONE, S, Q

__all__ = ["Connection", "FormContext", "Tensor", "MetricMap",
           "tensor2", "tensor_append", "decompose_oneform",
           "tensor_involution", "sigma_apply", "pi_project", "paper_metric",
           "sigma_pair_matrix", "frame_sigma_matrix"]

_SLOT_NAMES = ("xim", "xiz", "xip", "bxim", "bxiz", "bxip")

# slot involution: (xi^i)* = bxi^j g_ji and back
_SLOT_STAR = ((S, 5), (ONE, 4), (S.inv(), 3), (S, 2), (ONE, 1), (S.inv(), 0))


class Connection:
    """A sigma choice per calculus.

    ``s_choice``/``sbar_choice`` pick S and Sbar among 'qR' and 'qRinv';
    the barred choice defaults to the inverse of the unbarred one, the
    unique pairing for which the enlarged calculus is exactly metric
    compatible.
    """

    def __init__(self, s_choice="qR", calculus="unbarred", sbar_choice=None):
        if s_choice not in ("qR", "qRinv"):
            raise ValueError(f"unknown sigma choice {s_choice!r}")
        if calculus not in ("unbarred", "barred", "enlarged"):
            raise ValueError(f"unknown calculus {calculus!r}")
        self.s_choice = s_choice
        self.calculus = calculus
        self.sbar_choice = sbar_choice or ("qRinv" if s_choice == "qR" else "qR")
        if self.sbar_choice not in ("qR", "qRinv"):
            raise ValueError(f"unknown sigma choice {self.sbar_choice!r}")

    def allows(self, slot):
        if self.calculus == "enlarged":
            return True
        return (slot >= 3) == (self.calculus == "barred")

    def __repr__(self):
        return f"Connection({self.s_choice}, {self.calculus}, Sbar={self.sbar_choice})"


def _qr_matrices(alg):
    rm = alg.rm
    qr = rmat.mat_scale(Q, rm.rhat.m)
    qr_inv = rmat.mat_scale(Q.inv(), rm.rhat_inv.m)
    return qr, qr_inv


def sigma_pair_matrix(alg, conn, bar_left, bar_right):
    """The 9x9 matrix of sigma on one slot sector, in the xi basis.

    Returns (matrix, bar pattern of the output slots).
    """
    qr, qr_inv = _qr_matrices(alg)
    if not bar_left and not bar_right:
        return (qr if conn.s_choice == "qR" else qr_inv), (False, False)
    if bar_left and bar_right:
        return (qr if conn.sbar_choice == "qR" else qr_inv), (True, True)
    if not bar_left:                      # xi (x) bxi -> bxi (x) xi
        return qr_inv, (True, False)
    return qr, (False, True)              # bxi (x) xi -> xi (x) bxi


def frame_sigma_matrix(alg, conn, bar_left, bar_right):
    """Same map written in the frame basis (V = q Rhat^-1, Vbar = q^-1 Rhat)."""
    rm = alg.rm
    if bar_left == bar_right:
        return sigma_pair_matrix(alg, conn, bar_left, bar_right)[0]
    if not bar_left:
        return rmat.mat_scale(Q, rm.rhat_inv.m)
    return rmat.mat_scale(Q.inv(), rm.rhat.m)


class Tensor:
    """Sum of f * w_{s1} (x) ... (x) w_{sk} with left-pulled coefficients."""

    __slots__ = ("alg", "rank", "terms")

    def __init__(self, alg, rank, terms=None):
        self.alg = alg
        self.rank = rank
        self.terms = terms if terms is not None else {}

    def _acc(self, slots, el):
        if el.is_zero():
            return
        prev = self.terms.get(slots)
        tot = el if prev is None else prev + el
        if tot.is_zero():
            self.terms.pop(slots, None)
        else:
            self.terms[slots] = tot

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.rank == other.rank and self.terms == other.terms

    def __add__(self, other):
        out = Tensor(self.alg, self.rank, dict(self.terms))
        for slots, el in other.terms.items():
            out._acc(slots, el)
        return out

    def __neg__(self):
        return Tensor(self.alg, self.rank, {s: -e for s, e in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        return Tensor(self.alg, self.rank,
                      {s: e.scaled(c) for s, e in self.terms.items()})

    def left_mul(self, f):
        out = Tensor(self.alg, self.rank)
        for slots, el in self.terms.items():
            out._acc(slots, f * el)
        return out

    def right_mul(self, f):
        """Multiply by an algebra element on the right, pulling it left."""
        out = Tensor(self.alg, self.rank)
        for slots, el in self.terms.items():
            pulled = [(f, ())]
            for s in reversed(slots):
                nxt = []
                for g, tail in pulled:
                    for coeff, s2 in _slot_past(self.alg, s, g):
                        nxt.append((coeff, (s2,) + tail))
                pulled = nxt
            for g, newslots in pulled:
                out._acc(newslots, el * g)
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for slots in sorted(self.terms):
            body = " (x) ".join(_SLOT_NAMES[s] for s in slots)
            parts.append(f"({self.terms[slots]}) (*) {body}")
        return "  +  ".join(parts)

    __repr__ = __str__


def _slot_form(alg, slot):
    return alg.xi(slot) if slot < 3 else alg.bxi(slot - 3)


def _slot_past(alg, slot, f):
    """w_slot * f as a sum of g * w_slot' with left coefficients."""
    prod = alg.multiply(_slot_form(alg, slot), f)
    out = []
    for m, c in prod.terms.items():
        coeff_mono, s2 = _strip_slot(m)
        out.append((Element(alg, {coeff_mono: c}), s2))
    return out


def _strip_slot(m):
    """Split a form-degree-1 monomial into (coefficient monomial, slot)."""
    u, v = m[6], m[7]
    if u:
        (k,) = _mask_letters(u)
        return m[:6] + (0, 0), k
    (k,) = _mask_letters(v)
    return m[:6] + (0, 0), k + 3


def decompose_oneform(el):
    """A one-form as a list of (coefficient Element, slot)."""
    alg = el.alg
    coeffs = {}
    for m, c in el.terms.items():
        if mono_form_degree(m) != 1:
            raise ValueError("not a one-form")
        cm, s = _strip_slot(m)
        coeffs.setdefault(s, {})[cm] = c
    return [(Element(alg, t), s) for s, t in sorted(coeffs.items())]


def tensor2(a, b):
    """The tensor product over the algebra of two one-forms."""
    alg = a.alg
    out = Tensor(alg, 2)
    for g, t in decompose_oneform(b):
        for f, s in decompose_oneform(a):
            # f w_s (x) g w_t = f (w_s g) (x) w_t
            for h, s2 in _slot_past(alg, s, g):
                out._acc((s2, t), f * h)
    return out


def tensor_append(t, oneform):
    """t (x) w for a decomposable right factor, coefficients pulled left."""
    alg = t.alg
    out = Tensor(alg, t.rank + 1)
    for g, slot in decompose_oneform(oneform):
        for slots, el in t.right_mul(g).terms.items():
            out._acc(slots + (slot,), el)
    return out


def sigma_apply(t, conn, pos=0):
    """Apply sigma to slots (pos, pos+1); coefficients pass through."""
    alg = t.alg
    out = Tensor(alg, t.rank)
    for slots, el in t.terms.items():
        a, b = slots[pos], slots[pos + 1]
        mat, (bl, br) = sigma_pair_matrix(alg, conn, a >= 3, b >= 3)
        row = 3 * (a % 3) + (b % 3)
        base_l, base_r = (3 if bl else 0), (3 if br else 0)
        for col in range(9):
            cv = mat[row][col]
            if cv.is_zero():
                continue
            ns = slots[:pos] + (base_l + col // 3, base_r + col % 3) + slots[pos + 2:]
            out._acc(ns, el.scaled(cv))
    return out


def pi_project(t):
    """Replace the first tensor sign with the wedge product.

    On a rank-2 tensor the result is a two-form Element; on higher ranks
    a tensor whose first slot pair collapses, returned as a dict
    slot-tail -> form Element.
    """
    alg = t.alg
    if t.rank == 2:
        out = alg.zero()
        for (s1, s2), el in t.terms.items():
            out = out + el * _slot_form(alg, s1) * _slot_form(alg, s2)
        return out
    out = {}
    for slots, el in t.terms.items():
        wedge = el * _slot_form(alg, slots[0]) * _slot_form(alg, slots[1])
        tail = slots[2:]
        prev = out.get(tail)
        tot = wedge if prev is None else prev + wedge
        if tot.is_zero():
            out.pop(tail, None)
        else:
            out[tail] = tot
    return out


def tensor_involution(t, conn):
    """(xi (x) eta)* = sigma(eta* (x) xi*), extended antilinearly."""
    if t.rank != 2:
        raise ValueError("tensor involution is defined on rank-2 tensors")
    alg = t.alg
    out = Tensor(alg, 2)
    for (s1, s2), el in t.terms.items():
        c2, t2 = _SLOT_STAR[s2]
        c1, t1 = _SLOT_STAR[s1]
        base = Tensor(alg, 2, {(t2, t1): alg.scalar(c1 * c2)})
        out = out + sigma_apply(base, conn).right_mul(el.star())
    return out


class FormContext:
    """Invariant forms and the two differentials over one Algebra."""

    def __init__(self, alg):
        if not alg.radius_reduction:
            raise ValueError("the differential calculus needs radius reduction on")
        self.alg = alg
        g = alg.rm.g.lower
        eta = alg.zero()
        etabar = alg.zero()
        for i in range(3):
            for j in range(3):
                if not g[i][j].is_zero():
                    eta = eta + (alg.x(i) * alg.xi(j)).scaled(g[i][j])
                    etabar = etabar + (alg.x(i) * alg.bxi(j)).scaled(g[i][j])
        rm2 = alg.gen(RADI, 2)
        self.eta = eta
        self.etabar = etabar
        self.theta = (rm2 * eta).scaled((Q - 1).inv() * Q ** 2)
        self.thetabar = (rm2 * etabar).scaled((Q.inv() - 1).inv() * Q.inv() ** 2)

    def d(self, a, bar=False):
        """Graded commutator differential: -(th w - (-1)^p w th) per degree."""
        th = self.thetabar if bar else self.theta
        out = self.alg.zero()
        for (_, p), comp in self.alg.grade_split(a).items():
            sign = comp if p % 2 == 0 else -comp
            out = out + (sign * th - th * comp)
        return out

    def dbar(self, a):
        return self.d(a, bar=True)


class MetricMap:
    """A bilinear metric given by its values on the 36 basis slot pairs."""

    def __init__(self, alg, values):
        self.alg = alg
        self.values = values

    def __call__(self, t):
        if t.rank != 2:
            raise ValueError("the metric eats rank-2 tensors")
        out = self.alg.zero()
        for slots, el in t.terms.items():
            val = self.values.get(slots)
            if val is not None and not val.is_zero():
                out = out + el * val
        return out


def paper_metric(alg, alpha_value=None):
    """Metric values on the pure xi / bxi sectors.

    g(xi^i (x) xi^j)   = g^ij alpha^2 q^-1 r^2 Lam^2
    g(bxi^i (x) bxi^j) = g^ij alpha^2 q    r^2 Lam^-2
    """
    g = alg.rm.g.lower
    values = {}
    for i in range(3):
        for j in range(3):
            gij = g[i][j]
            if gij.is_zero():
                continue
            unb = Element(alg, {(2, 2, 2, 0, 0, 0, 0, 0): gij * Q.inv()})
            bar = Element(alg, {(2, -2, 2, 0, 0, 0, 0, 0): gij * Q})
            if alpha_value is not None:
                unb = alg.substitute_alpha(unb, alpha_value)
                bar = alg.substitute_alpha(bar, alpha_value)
            values[(i, j)] = unb
            values[(i + 3, j + 3)] = bar
    return MetricMap(alg, values)
