"""Irreducible *-representations of the q-deformed su(3) symmetry algebra.

Representations are labeled by two non-negative integers (n1, n2) and
realized on the Gelfand-Tsetlin basis |n1,n2,j1,j2,m> with

    j_i = 0..n_i,   (j1+j2)/2 - |m| a non-negative integer.

Magnetic labels are half-integers; we store mm = 2m throughout so that
basis bookkeeping stays exact.  Generator actions follow the standard
ladder formulas: the K's (and the Casimir extension generator H) act
diagonally with exponents on the t = q^(1/12) lattice, E1 raises m,
E2 moves (j1, m) -> (j1+1, m-1/2) or (j2, m) -> (j2-1, m-1/2) with
square-root coefficients built from q-numbers, and F_i are the transposes
(the *-structure in an orthonormal basis).
"""

from __future__ import annotations

import json
import threading
from fractions import Fraction
from math import sqrt
from typing import NamedTuple

import numpy as np

from .qarith import LaurentScalar, QParam, UnsupportedModeError, qint


class LabelError(ValueError):
    """Invalid irrep or Gelfand-Tsetlin label."""


class IrrepLabel(NamedTuple):
    n1: int
    n2: int


class GTVector(NamedTuple):
    """Basis label; mm and the j's are ints, the magnetic label is m = mm/2.

    An equivalent labeling by triangular patterns p_ij exists
    (n1 = p13-p23-1, n2 = p23-p33-1, j1 = p12-p23-1, j2 = p23-p22,
    2m = 2p11-p12-p22-1); this package stays with the (j1, j2, m) labels.
    """

    n1: int
    n2: int
    j1: int
    j2: int
    mm: int

    @property
    def m(self) -> float:
        return self.mm / 2.0


GENERATORS = ("K1", "K1inv", "K2", "K2inv", "E1", "E2", "F1", "F2", "H", "Hinv")
DIAGONAL_GENERATORS = ("K1", "K1inv", "K2", "K2inv", "H", "Hinv")


def check_label(label) -> IrrepLabel:
    n1, n2 = label
    if n1 < 0 or n2 < 0 or int(n1) != n1 or int(n2) != n2:
        raise LabelError(f"irrep label needs non-negative integers, got {label}")
    return IrrepLabel(int(n1), int(n2))


def dim(label) -> int:
    n1, n2 = check_label(label)
    return (n1 + 1) * (n2 + 1) * (n1 + n2 + 2) // 2


def gt_triples(label) -> list[tuple[int, int, int]]:
    """Ordered (j1, j2, mm) triples, lexicographic in (j1, j2, m)."""
    n1, n2 = check_label(label)
    out = []
    for j1 in range(n1 + 1):
        for j2 in range(n2 + 1):
            s = j1 + j2
            out.append([(j1, j2, mm) for mm in range(-s, s + 1, 2)])
    return [t for block in out for t in block]


def enumerate_basis(label) -> list[GTVector]:
    n1, n2 = check_label(label)
    return [GTVector(n1, n2, *t) for t in gt_triples(label)]


def gt_index(label) -> dict[tuple[int, int, int], int]:
    return {t: i for i, t in enumerate(gt_triples(label))}


def valid_triple(label, triple) -> bool:
    n1, n2 = label
    j1, j2, mm = triple
    return 0 <= j1 <= n1 and 0 <= j2 <= n2 and abs(mm) <= j1 + j2 and (mm - j1 - j2) % 2 == 0


def highest_weight_triple(label) -> tuple[int, int, int]:
    n1, _ = check_label(label)
    return (n1, 0, n1)


# -- diagonal weights, in t-units (t = q^(1/12)) ----------------------------

def weight_twelfths(gen: str, label, triple) -> int:
    """Exponent w with gen|triple> = q^(w/12)|triple>, for diagonal gen."""
    n1, n2 = label
    j1, j2, mm = triple
    if gen in ("K1", "K1inv"):
        w = 6 * mm
    elif gen in ("K2", "K2inv"):
        w = 9 * (j1 - j2) + 6 * (n2 - n1) - 3 * mm
    elif gen in ("H", "Hinv"):
        w = 6 * mm - 6 * (j1 - j2) - 4 * (n2 - n1)
    else:
        raise LabelError(f"{gen} is not diagonal")
    return -w if gen.endswith("inv") else w


def coeff_a(label, j1: int, j2: int, q: float) -> float:
    n1, n2 = label
    p = QParam("float", q)
    num = qint(n1 - j1, p) * qint(n2 + j1 + 2, p) * qint(j1 + 1, p)
    den = qint(j1 + j2 + 1, p) * qint(j1 + j2 + 2, p)
    return sqrt(num / den)


def coeff_b(label, j1: int, j2: int, q: float) -> float:
    if j1 + j2 == 0:
        return 1.0
    n1, n2 = label
    p = QParam("float", q)
    num = qint(n1 + j2 + 1, p) * qint(n2 - j2 + 1, p) * qint(j2, p)
    den = qint(j1 + j2, p) * qint(j1 + j2 + 1, p)
    return sqrt(num / den)


def _qn(half_arg: int, q: float) -> float:
    # q-number of a half-integer given as twice its value
    return qint(Fraction(half_arg, 2), QParam("float", q))


def generator_action(label, gen: str, p: QParam) -> list[list[tuple[int, float]]]:
    """Action of one generator as an adjacency list over the ordered basis.

    Entry i holds the (target index, coefficient) pairs of gen|i>.
    Float mode only; sparse by construction (K/H: 1 entry, E1/F1: <=1,
    E2/F2: <=2).
    """
    if p.is_exact:
        raise UnsupportedModeError("generator_action is float-mode; exact mode covers diagonals only")
    label = check_label(label)
    q = p.q
    triples = gt_triples(label)
    index = {t: i for i, t in enumerate(triples)}
    out: list[list[tuple[int, float]]] = [[] for _ in triples]

    if gen in DIAGONAL_GENERATORS:
        t12 = q ** (1.0 / 12.0)
        for i, t in enumerate(triples):
            out[i].append((i, t12 ** weight_twelfths(gen, label, t)))
        return out

    for i, (j1, j2, mm) in enumerate(triples):
        s = j1 + j2
        if gen == "E1":
            c = sqrt(_qn(s - mm, q) * _qn(s + mm + 2, q))
            if c:
                out[i].append((index[(j1, j2, mm + 2)], c))
        elif gen == "F1":
            c = sqrt(_qn(s + mm, q) * _qn(s - mm + 2, q))
            if c:
                out[i].append((index[(j1, j2, mm - 2)], c))
        elif gen == "E2":
            ca = sqrt(_qn(s - mm + 2, q)) * coeff_a(label, j1, j2, q)
            if ca:
                out[i].append((index[(j1 + 1, j2, mm - 1)], ca))
            cb = sqrt(_qn(s + mm, q)) * coeff_b(label, j1, j2, q)
            if cb and valid_triple(label, (j1, j2 - 1, mm - 1)):
                out[i].append((index[(j1, j2 - 1, mm - 1)], cb))
        elif gen == "F2":
            # adjoint of E2, written out so the transpose contract is testable
            if j1 >= 1:
                ca = sqrt(_qn(s - mm, q)) * coeff_a(label, j1 - 1, j2, q)
                if ca:
                    out[i].append((index[(j1 - 1, j2, mm + 1)], ca))
            if j2 + 1 <= label.n2:
                cb = sqrt(_qn(s + mm + 2, q)) * coeff_b(label, j1, j2 + 1, q)
                if cb:
                    out[i].append((index[(j1, j2 + 1, mm + 1)], cb))
        else:
            raise LabelError(f"unknown generator {gen!r}")
    return out


class _MatrixCache:
    """Per-process memo for generator matrices; concurrent readers are fine,
    inserts are serialized."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get_or_build(self, key, builder):
        hit = self._data.get(key)
        if hit is not None:
            return hit
        value = builder()
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()

    def seed(self, key, value):
        with self._lock:
            self._data.setdefault(key, value)

    def peek(self, key):
        return self._data.get(key)


matrix_cache = _MatrixCache()


def generator_matrix(label, gen: str, p: QParam):
    """Generator matrix on the ordered GT basis.

    Float mode returns a dense real ndarray.  Exact mode returns the list
    of diagonal LaurentScalar entries for K/H generators and rejects E/F
    (their entries carry square roots).
    """
    label = check_label(label)
    if p.is_exact:
        if gen not in DIAGONAL_GENERATORS:
            raise UnsupportedModeError(f"exact mode holds only diagonal generators, not {gen}")
        return [
            LaurentScalar.t_power(weight_twelfths(gen, label, t))
            for t in gt_triples(label)
        ]

    def build():
        action = generator_action(label, gen, p)
        n = len(action)
        mat = np.zeros((n, n))
        for src, targets in enumerate(action):
            for tgt, c in targets:
                mat[tgt, src] += c
        mat.setflags(write=False)
        return mat

    return matrix_cache.get_or_build((label, gen, p.q), build)


def export_matrix_json(label, gen: str, p: QParam) -> str:
    """Sparse triplet export: {label, generator, q, triplets}."""
    mat = generator_matrix(label, gen, p)
    rows, cols = np.nonzero(mat)
    triplets = [[int(r), int(c), float(mat[r, c])] for r, c in zip(rows, cols)]
    triplets.sort()
    payload = {
        "label": list(label),
        "generator": gen,
        "q": p.q,
        "triplets": triplets,
    }
    return json.dumps(payload, sort_keys=True)


def import_matrix_json(text: str):
    payload = json.loads(text)
    n = dim(tuple(payload["label"]))
    mat = np.zeros((n, n))
    for r, c, v in payload["triplets"]:
        mat[r, c] = v
    return tuple(payload["label"]), payload["generator"], payload["q"], mat


def _mat_scale(*mats) -> float:
    return max(max((np.abs(m).max(initial=0.0) for m in mats), default=0.0), 1.0)


def verify_hopf_relations(label, p: QParam, tol: float = 1e-11) -> dict:
    """Check every defining relation of the symmetry algebra on one irrep.

    Returns {"passed": bool, "max_residual": float, "relations": [...]},
    one entry per relation.  Residuals are measured relative to the norms
    of the constituent matrix products, the natural matrix scale (the
    products themselves grow like powers of q-numbers on large irreps).
    """
    label = check_label(label)
    q = p.q
    g = {name: generator_matrix(label, name, p) for name in GENERATORS}
    eye = np.eye(dim(label))

    def qcomm(a, b):
        return a @ b - (1.0 / q) * b @ a

    # (name, lhs, rhs, matrices that set the comparison scale)
    checks = [("[K1,K2] = 0", g["K1"] @ g["K2"], g["K2"] @ g["K1"], None)]
    for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)):
        ki, kiv = g[f"K{i}"], g[f"K{i}inv"]
        scale_e = q if i == j else q ** -0.5
        checks.append(
            (f"K{i} E{j} K{i}^-1 = q^{'1' if i == j else '-1/2'} E{j}",
             ki @ g[f"E{j}"] @ kiv, scale_e * g[f"E{j}"], None))
        scale_f = 1.0 / q if i == j else q**0.5
        checks.append(
            (f"K{i} F{j} K{i}^-1 = q^{'-1' if i == j else '1/2'} F{j}",
             ki @ g[f"F{j}"] @ kiv, scale_f * g[f"F{j}"], None))
    for i in (1, 2):
        ei, fi = g[f"E{i}"], g[f"F{i}"]
        ki, kiv = g[f"K{i}"], g[f"K{i}inv"]
        checks.append(
            (f"[E{i},F{i}] = (K{i}^2 - K{i}^-2)/(q - q^-1)",
             ei @ fi - fi @ ei, (ki @ ki - kiv @ kiv) / (q - 1.0 / q),
             (ei @ fi, fi @ ei)))
    checks.append(("[E1,F2] = 0", g["E1"] @ g["F2"], g["F2"] @ g["E1"], None))
    checks.append(("[E2,F1] = 0", g["E2"] @ g["F1"], g["F1"] @ g["E2"], None))
    for x in ("E", "F"):
        for i, j in ((1, 2), (2, 1)):
            a, b = g[f"{x}{i}"], g[f"{x}{j}"]
            aab, aba, baa = a @ a @ b, a @ b @ a, b @ a @ a
            zero = np.zeros_like(a)
            checks.append(
                (f"serre {x}{i}{x}{j}",
                 aab - (q + 1.0 / q) * aba + baa, zero, (aab, aba, baa)))
            checks.append(
                (f"q-commutator serre [{x}{i},[{x}{j},{x}{i}]_q]_q",
                 qcomm(a, qcomm(b, a)), zero, (aab, aba, baa)))
            checks.append(
                (f"q-commutator serre [[{x}{i},{x}{j}]_q,{x}{i}]_q",
                 qcomm(qcomm(a, b), a), zero, (aab, aba, baa)))
    # H is the cube-root extension: H^3 = (K1 K2^-1)^2, and H is central
    # relative to the Cartan part
    checks.append(("H^3 = (K1 K2^-1)^2",
                   g["H"] @ g["H"] @ g["H"],
                   g["K1"] @ g["K2inv"] @ g["K1"] @ g["K2inv"], None))
    checks.append(("H H^-1 = 1", g["H"] @ g["Hinv"], eye, None))

    report = []
    worst = 0.0
    for name, lhs, rhs, scale_mats in checks:
        scale = _mat_scale(lhs, rhs) if scale_mats is None else _mat_scale(*scale_mats)
        r = float(np.abs(lhs - rhs).max(initial=0.0) / scale)
        worst = max(worst, r)
        report.append({"relation": name, "residual": r, "passed": r < tol})
    return {
        "label": list(label),
        "q": q,
        "tol": tol,
        "passed": worst < tol,
        "max_residual": worst,
        "relations": report,
    }


def labels_up_to(total: int) -> list[IrrepLabel]:
    """All irrep labels with n1 + n2 <= total, ordered."""
    return [IrrepLabel(n1, n2) for s in range(total + 1) for n1 in range(s + 1) for n2 in [s - n1]]
