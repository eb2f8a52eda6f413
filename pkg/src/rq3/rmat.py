"""The SO_q(3) braid matrix, isotropic metric and projector decomposition.

Indices run over (-, 0, +), encoded as 0, 1, 2; a 9x9 matrix M^{ij}_{kl}
is stored row-major with row 3*i+j and column 3*k+l, so text output is
deterministic in the lexicographic pair order with - < 0 < +.

The braid matrix is not transcribed from the literature: it is
reconstructed from the explicit coordinate/one-form commutation relations
by reading each relation as one row of q * Rhat.  Everything else (the
inverse, the three projectors) is computed from it by exact linear
algebra, and the defining identities -- braid equation, metric
compatibility, minimal polynomial, projector ranks -- are all checkable
at runtime.
"""

from __future__ import annotations

import functools

from .qscalar import Scalar, ZERO, ONE, S, Q, H

__all__ = [
    "IsoMetric", "BraidMatrix", "ProjectorTrio", "RMatConstants",
    "build_metric", "build_rhat", "build_projectors", "invert",
    "check_braid", "check_metric_compat", "constants",
    "mat_mul", "mat_add", "mat_sub", "mat_scale", "mat_eq", "mat_is_zero",
    "identity", "kron", "trace", "relations_from_pa",
]

_DEG = (-1, 0, 1)          # grading degree of (x^-, x^0, x^+)
LABEL = ("-", "0", "+")


# ---------------------------------------------------------------------------
# dense exact matrices (lists of lists of Scalar)
# ---------------------------------------------------------------------------

def zeros(n):
    return [[ZERO] * n for _ in range(n)]


def identity(n):
    m = zeros(n)
    for i in range(n):
        m[i][i] = ONE
    return m


def mat_mul(a, b):
    n, mth, p = len(a), len(b), len(b[0])
    out = [[ZERO] * p for _ in range(n)]
    for i in range(n):
        ai, oi = a[i], out[i]
        for k in range(mth):
            x = ai[k]
            if x.is_zero():
                continue
            bk = b[k]
            for j in range(p):
                y = bk[j]
                if not y.is_zero():
                    oi[j] = oi[j] + x * y
    return out


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a):
    return [[c * x for x in row] for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def mat_is_zero(a):
    return all(x.is_zero() for row in a for x in row)


def trace(a):
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def kron(a, b):
    na, nb = len(a), len(b)
    out = [[ZERO] * (na * nb) for _ in range(na * nb)]
    for i in range(na):
        for j in range(na):
            x = a[i][j]
            if x.is_zero():
                continue
            for k in range(nb):
                for l in range(nb):
                    y = b[k][l]
                    if not y.is_zero():
                        out[i * nb + k][j * nb + l] = x * y
    return out


def invert(m):
    """Exact inverse by Gauss-Jordan elimination over Q(s)."""
    n = len(m)
    a = [row[:] for row in m]
    inv = identity(n)
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col].inv()
        a[col] = [x * d for x in a[col]]
        inv[col] = [x * d for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if f.is_zero():
                continue
            a[r] = [x - f * y for x, y in zip(a[r], a[col])]
            inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    return inv


# ---------------------------------------------------------------------------
# metric and braid matrix
# ---------------------------------------------------------------------------

class IsoMetric:
    """The SO_q(3)-isotropic metric; g_ij and g^ij coincide entrywise."""

    __slots__ = ("lower",)

    def __init__(self, lower):
        self.lower = lower

    def __getitem__(self, ij):
        return self.lower[ij[0]][ij[1]]

    upper = property(lambda self: self.lower)

    def trace_pairing(self):
        """g^{mn} g_{mn}, the trace-projector normalizer."""
        t = ZERO
        for mi in range(3):
            for ni in range(3):
                t = t + self.lower[mi][ni] * self.lower[mi][ni]
        return t


def build_metric():
    g = zeros(3)
    g[0][2] = S.inv()
    g[1][1] = ONE
    g[2][0] = S
    return IsoMetric(g)


# x^i xi^j = q Rhat^{ij}_{kl} xi^k x^l, written out relation by relation.
# Each entry below is one relation: (i, j) -> [(coefficient, (k, l)), ...].
_X_XI_RELATIONS = None


def _x_xi_relations():
    global _X_XI_RELATIONS
    if _X_XI_RELATIONS is None:
        q, h, one = Q, H, ONE
        q2 = q * q
        hq1 = h * (q + 1)
        _X_XI_RELATIONS = {
            (0, 0): [(q2, (0, 0))],
            (1, 0): [(q, (0, 1))],
            (2, 0): [(one, (0, 2))],
            (0, 1): [(q, (1, 0)), (q2 - 1, (0, 1))],
            (1, 1): [(q, (1, 1)), (-hq1, (0, 2))],
            (2, 1): [(q, (1, 2))],
            (0, 2): [(one, (2, 0)), (-hq1, (1, 1)), (h * hq1, (0, 2))],
            (1, 2): [(q, (2, 1)), (q2 - 1, (1, 2))],
            (2, 2): [(q2, (2, 2))],
        }
    return _X_XI_RELATIONS


class BraidMatrix:
    """9x9 braid matrix with pair-indexed entry access."""

    __slots__ = ("m",)

    def __init__(self, m):
        self.m = m

    def entry(self, i, j, k, l):
        return self.m[3 * i + j][3 * k + l]


def build_rhat():
    """Reconstruct Rhat from the coordinate/one-form relations.

    The degree selection rule Rhat^{ij}_{kl} = 0 for i+j != k+l fills every
    entry the relations do not mention; a relation assigning two values to
    one entry is a hard error.
    """
    m = zeros(9)
    qinv = Q.inv()
    seen = set()
    for (i, j), terms in _x_xi_relations().items():
        for coeff, (k, l) in terms:
            if _DEG[i] + _DEG[j] != _DEG[k] + _DEG[l]:
                raise ArithmeticError(f"relation violates degree rule: {(i, j, k, l)}")
            if (i, j, k, l) in seen:
                raise ArithmeticError(f"conflicting assignment for entry {(i, j, k, l)}")
            seen.add((i, j, k, l))
            m[3 * i + j][3 * k + l] = coeff * qinv
    return BraidMatrix(m)


def check_braid(rhat):
    """Rhat_12 Rhat_23 Rhat_12 == Rhat_23 Rhat_12 Rhat_23, exactly."""
    one3 = identity(3)
    r12 = kron(rhat.m, one3)
    r23 = kron(one3, rhat.m)
    lhs = mat_mul(mat_mul(r12, r23), r12)
    rhs = mat_mul(mat_mul(r23, r12), r23)
    return mat_is_zero(mat_sub(lhs, rhs))


def check_metric_compat(rhat, rhat_inv, g):
    """The four index variants of g_{il} Rhat^{+-1 lh}_{jk} = Rhat^{-+1 hl}_{ij} g_{lk}."""
    gm = g.lower
    for a, b in ((rhat, rhat_inv), (rhat_inv, rhat)):
        for h_, j, k in ((h_, j, k) for h_ in range(3) for j in range(3) for k in range(3)):
            for i in range(3):
                lhs = ZERO
                rhs = ZERO
                for l in range(3):
                    lhs = lhs + gm[i][l] * a.entry(l, h_, j, k)
                    rhs = rhs + b.entry(h_, l, i, j) * gm[l][k]
                if lhs != rhs:
                    return False
                # upper-index variant: g^{il} Rhat_{lh}^{jk} = Rhat_{hl}^{ij} g^{lk}
                lhs = ZERO
                rhs = ZERO
                for l in range(3):
                    lhs = lhs + gm[i][l] * a.entry(j, k, l, h_)
                    rhs = rhs + b.entry(i, j, h_, l) * gm[l][k]
                if lhs != rhs:
                    return False
    return True


class ProjectorTrio:
    """The q-symmetric-traceless / q-antisymmetric / trace projectors."""

    __slots__ = ("ps", "pa", "pt")

    def __init__(self, ps, pa, pt):
        self.ps = ps
        self.pa = pa
        self.pt = pt

    def validate(self, rhat):
        """Idempotency, orthogonality, completeness, decomposition, ranks."""
        mats = {"s": self.ps, "a": self.pa, "t": self.pt}
        for na, ma in mats.items():
            for nb, mb in mats.items():
                prod = mat_mul(ma, mb)
                want = ma if na == nb else zeros(9)
                if not mat_eq(prod, want):
                    return False, f"P_{na} P_{nb} != {'P_' + na if na == nb else '0'}"
        if not mat_eq(mat_add(mat_add(self.ps, self.pa), self.pt), identity(9)):
            return False, "P_s + P_a + P_t != 1"
        decomp = mat_add(mat_sub(mat_scale(Q, self.ps), mat_scale(Q.inv(), self.pa)),
                         mat_scale(Q.inv() ** 2, self.pt))
        if not mat_eq(decomp, rhat.m):
            return False, "q P_s - q^-1 P_a + q^-2 P_t != Rhat"
        for name, mtx, want in (("t", self.pt, 1), ("a", self.pa, 3), ("s", self.ps, 5)):
            if trace(mtx) != want:
                return False, f"tr P_{name} != {want}"
        return True, ""


def build_projectors(rhat, g):
    """P_t from the metric, P_a solved from the decomposition, P_s as the rest."""
    norm = g.trace_pairing().inv()
    pt = zeros(9)
    for i in range(3):
        for j in range(3):
            gij = g.lower[i][j]
            if gij.is_zero():
                continue
            for k in range(3):
                for l in range(3):
                    gkl = g.lower[k][l]
                    if not gkl.is_zero():
                        pt[3 * i + j][3 * k + l] = norm * gij * gkl
    qinv = Q.inv()
    pa = mat_scale((Q + qinv).inv(),
                   mat_add(mat_sub(mat_scale(Q, identity(9)), rhat.m),
                           mat_scale(qinv * qinv - Q, pt)))
    ps = mat_sub(mat_sub(identity(9), pa), pt)
    trio = ProjectorTrio(ps, pa, pt)
    ok, msg = trio.validate(rhat)
    if not ok:
        raise ArithmeticError(f"projector reconstruction failed: {msg}")
    return trio


def relations_from_pa(pa):
    """Row-reduce the antisymmetric-projector relations P_a x x = 0.

    Rows are vectors over the nine ordered products x^k x^l.  Pivoting on
    the largest word in the term order (x^0 < x^- < x^+, left letter
    first) turns each independent row into a rewrite rule
    ``pivot word -> sum of smaller words``; the result is returned as
    {(k, l): ((coeff, (k', l')), ...)} and should reproduce the defining
    commutation relations verbatim.
    """
    wordrank = {}
    for k in range(3):
        for l in range(3):
            slot = {0: 1, 1: 0, 2: 2}          # x^0 < x^- < x^+
            wordrank[(k, l)] = (slot[k], slot[l])
    cols = sorted(((k, l) for k in range(3) for l in range(3)),
                  key=lambda w: wordrank[w], reverse=True)
    rows = [{(k, l): pa[r][3 * k + l] for k in range(3) for l in range(3)
             if not pa[r][3 * k + l].is_zero()} for r in range(9)]
    rows = [r for r in rows if r]
    rules = {}
    for piv in cols:
        src = next((r for r in rows if piv in r), None)
        if src is None:
            continue
        inv = src[piv].inv()
        src = {w: c * inv for w, c in src.items()}
        rows = [_row_eliminate(r, src, piv) for r in rows]
        rows = [r for r in rows if r]
        rules[piv] = tuple(sorted(((-c, w) for w, c in src.items() if w != piv),
                                  key=lambda t: wordrank[t[1]], reverse=True))
    return rules


def _row_eliminate(row, src, piv):
    c = row.get(piv)
    if c is None or c.is_zero():
        return row
    out = dict(row)
    for w, s in src.items():
        v = out.get(w, ZERO) - c * s
        if v.is_zero():
            out.pop(w, None)
        else:
            out[w] = v
    return out


class RMatConstants:
    """All rmat-level constants, built once and shared."""

    __slots__ = ("g", "rhat", "rhat_inv", "projectors")

    def __init__(self):
        self.g = build_metric()
        self.rhat = build_rhat()
        self.rhat_inv = BraidMatrix(invert(self.rhat.m))
        self.projectors = build_projectors(self.rhat, self.g)


@functools.cache
def constants():
    return RMatConstants()
