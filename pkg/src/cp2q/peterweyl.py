"""Orthonormal Peter-Weyl basis of the quantum SU(3) coordinate algebra.

A basis element t(n1,n2)^{l1,l2,k}_{j1,j2,m} is modeled as the pair of a
white Gelfand-Tsetlin triple (j1,j2,m) and a black triple (l1,l2,k) inside
the same irrep label: the isometry onto V (x) V is taken as the definition,
with the white action on the first leg and the black action on the second.
The normalization constants in the harmonic construction are never
materialized; the basis is orthonormal by fiat, which fixes every inner
product below.

On top of the basis the module carves out the quantum 5-sphere (black
singlets), the projective plane (additionally n1 = n2), the equivariant
line bundles, and the antiholomorphic 1-form doublets, and verifies the
lowering-operator machinery that generates the basis from highest-weight
vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import NamedTuple

from . import irreps, ualg
from .irreps import matrix_cache
from .qarith import QParam, qbinom, qfact, qint


class PWBasisVector(NamedTuple):
    n1: int
    n2: int
    white: tuple  # (j1, j2, mm)
    black: tuple  # (l1, l2, kk)


PWVector = dict  # PWBasisVector -> float


def pw_vector(n1, n2, white, black, coeff: float = 1.0) -> PWVector:
    label = irreps.check_label((n1, n2))
    for t in (tuple(white), tuple(black)):
        if not irreps.valid_triple(label, t):
            raise irreps.LabelError(f"triple {t} invalid in V{tuple(label)}")
    return {PWBasisVector(label.n1, label.n2, tuple(white), tuple(black)): coeff}


def add_into(acc: PWVector, vec: PWVector, scale: float = 1.0) -> None:
    for k, c in vec.items():
        nc = acc.get(k, 0.0) + scale * c
        if nc == 0.0:
            acc.pop(k, None)
        else:
            acc[k] = nc


def scaled(vec: PWVector, scale: float) -> PWVector:
    return {k: scale * c for k, c in vec.items()} if scale else {}


def dot(a: PWVector, b: PWVector) -> float:
    if len(b) < len(a):
        a, b = b, a
    return sum(c * b.get(k, 0.0) for k, c in a.items())


def norm(a: PWVector) -> float:
    return sqrt(dot(a, a))


def _action_lists(label, gen: str, p: QParam):
    key = ("action", label, gen, p.q)

    def build():
        return irreps.generator_action(label, gen, p)

    return matrix_cache.get_or_build(key, build)


def _act(elem: ualg.AlgebraElement, vec: PWVector, p: QParam, leg: str) -> PWVector:
    """Apply an algebra element to the white or black leg of a PW vector."""
    out: PWVector = {}
    for word, wc in elem.terms.items():
        partial = dict(vec)
        for gen in reversed(word):  # rightmost letter acts first
            nxt: PWVector = {}
            by_label: dict = {}
            for key, c in partial.items():
                by_label.setdefault((key.n1, key.n2), []).append((key, c))
            for label, items in by_label.items():
                action = _action_lists(label, gen, p)
                index = irreps.gt_index(label)
                triples = irreps.gt_triples(label)
                for key, c in items:
                    src = index[key.white if leg == "white" else key.black]
                    for tgt, coeff in action[src]:
                        trip = triples[tgt]
                        nk = (
                            PWBasisVector(key.n1, key.n2, trip, key.black)
                            if leg == "white"
                            else PWBasisVector(key.n1, key.n2, key.white, trip)
                        )
                        nxt[nk] = nxt.get(nk, 0.0) + c * coeff
            partial = nxt
        add_into(out, partial, wc)
    return {k: v for k, v in out.items() if v != 0.0}


def white_act(elem: ualg.AlgebraElement, vec: PWVector, p: QParam) -> PWVector:
    return _act(elem, vec, p, "white")


def black_act(elem: ualg.AlgebraElement, vec: PWVector, p: QParam) -> PWVector:
    return _act(elem, vec, p, "black")


def black_k1k22_twelfths(n1: int, n2: int, black: tuple) -> int:
    """Exponent w with K1K2^2 acting (black) as q^(w/12): the line-bundle grade."""
    label = (n1, n2)
    return (
        irreps.weight_twelfths("K1", label, black)
        + 2 * irreps.weight_twelfths("K2", label, black)
    )


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceSpec:
    kind: str  # "sphere" | "cp2" | "line_bundle" | "form1_doublet"
    nmax: int
    N: int = 0


def _singlet_labels(spec: SubspaceSpec) -> list[tuple[int, int]]:
    if spec.kind == "sphere":
        return [(n1, n2) for n1 in range(spec.nmax + 1) for n2 in range(spec.nmax + 1)]
    if spec.kind == "cp2":
        return [(n, n) for n in range(spec.nmax + 1)]
    if spec.kind == "line_bundle":
        if spec.N >= 0:
            return [(n, n + spec.N) for n in range(spec.nmax + 1)]
        return [(n - spec.N, n) for n in range(spec.nmax + 1)]
    raise ValueError(f"kind {spec.kind!r} has no singlet labels")


def subspace_basis(spec: SubspaceSpec):
    """Ordered basis of a carved-out subspace.

    Singlet kinds return PWBasisVector lists (black triple (0,0,0));
    form1_doublet returns (plus, minus) PWBasisVector pairs, first the
    diagonal family V(n,n) with black (1,0,+-1/2), then the off-diagonal
    V(n,n+3) with black (0,1,+-1/2).
    """
    if spec.nmax < 0:
        raise ValueError("nmax must be >= 0")
    if spec.kind != "form1_doublet":
        out = []
        for label in _singlet_labels(spec):
            for w in irreps.gt_triples(label):
                out.append(PWBasisVector(label[0], label[1], w, (0, 0, 0)))
        return out
    pairs = []
    for n in range(1, spec.nmax + 1):
        for w in irreps.gt_triples((n, n)):
            pairs.append(
                (PWBasisVector(n, n, w, (1, 0, 1)), PWBasisVector(n, n, w, (1, 0, -1)))
            )
    for n in range(spec.nmax + 1):
        for w in irreps.gt_triples((n, n + 3)):
            pairs.append(
                (PWBasisVector(n, n + 3, w, (0, 1, 1)), PWBasisVector(n, n + 3, w, (0, 1, -1)))
            )
    return pairs


def basis_dump_lines(spec: SubspaceSpec) -> list[str]:
    """JSON-lines export; half-integers stored doubled."""
    import json

    rows = []
    basis = subspace_basis(spec)
    if spec.kind == "form1_doublet":
        basis = [v for pair in basis for v in pair]
    for v in basis:
        rows.append(json.dumps({
            "n1": v.n1, "n2": v.n2,
            "white": list(v.white), "black": list(v.black),
        }, sort_keys=True))
    return rows


# -- the lowering-operator machinery ----------------------------------------

def gt_lowering_word(n1: int, n2: int, j1: int, j2: int, mm: int, p: QParam) -> ualg.AlgebraElement:
    """Lowering element carrying the highest-weight vector onto |j1,j2,m>.

    Sum over k of q-binomially weighted words F1^a [F2,F1]_q^b F2^c with the
    square-root normalization factor; reproduces each basis vector when
    evaluated on the irrep and applied to the highest-weight vector.
    """
    label = irreps.check_label((n1, n2))
    if not irreps.valid_triple(label, (j1, j2, mm)):
        raise irreps.LabelError(f"triple {(j1, j2, mm)} invalid in V{tuple(label)}")
    q = p.q
    s = j1 + j2
    half_plus = (s + mm) // 2   # (j1+j2)/2 + m
    half_minus = (s - mm) // 2  # (j1+j2)/2 - m

    norm_sq = (
        qint(s + 1, p)
        * qfact(half_plus, p) / qfact(half_minus, p)
        * qfact(n2 - j2, p) * qfact(j1, p) / (qfact(n1 - j1, p) * qfact(j2, p))
        * qfact(n1 + j2 + 1, p) * qfact(n2 + j1 + 1, p)
        / (qfact(n1, p) * qfact(n2, p) * qfact(n1 + n2 + 1, p))
    )
    nfac = sqrt(norm_sq)

    f1 = ualg.AlgebraElement.gen("F1")
    f2 = ualg.AlgebraElement.gen("F2")
    qc = ualg.qcommutator(f2, f1, p)

    def power(elem, n):
        out = ualg.AlgebraElement.unit()
        for _ in range(n):
            out = out * elem
        return out

    total = ualg.AlgebraElement.zero()
    for k in range(n1 - j1 + 1):
        coeff = (
            q ** (-k * (s + k + 1))
            / qfact(s + k + 1, p)
            * qbinom(n1 - j1, k, p)
        )
        word = power(f1, half_minus + k) * power(qc, n1 - j1 - k) * power(f2, j2 + k)
        total = total + coeff * word
    return nfac * total


def verify_gt_lowering(label, p: QParam, tol: float = 1e-9) -> dict:
    """Apply every lowering element to the highest-weight vector and compare
    with the unit basis vector it should reproduce."""
    import numpy as np

    label = irreps.check_label(label)
    hw = irreps.highest_weight_triple(label)
    index = irreps.gt_index(label)
    hw_idx = index[hw]
    worst = 0.0
    failures = []
    for t in irreps.gt_triples(label):
        elem = gt_lowering_word(label.n1, label.n2, *t, p)
        mat = ualg.evaluate(elem, label, p)
        got = mat[:, hw_idx]
        expect = np.zeros(len(index))
        expect[index[t]] = 1.0
        r = float(np.abs(got - expect).max())
        worst = max(worst, r)
        if r >= tol:
            failures.append({"triple": list(t), "residual": r})
    return {"label": list(label), "max_residual": worst, "passed": not failures,
            "failures": failures}


def verify_lemma_commutators(label, nmax_power: int, p: QParam, tol: float = 1e-11) -> dict:
    """The five commutator identities behind the lowering-operator lemma,
    as matrix identities for powers 1..nmax_power.

    The two [E_i, F_i^n] identities carry (q-q^-1)^-1, matching their n=1
    specialization to the defining relations.
    """
    import numpy as np

    q = p.q
    gen = ualg.AlgebraElement.gen
    word = ualg.AlgebraElement.word
    e1, e2, f1, f2 = gen("E1"), gen("E2"), gen("F1"), gen("F2")
    qc = ualg.qcommutator(f2, f1, p)

    def power(elem, n):
        out = ualg.AlgebraElement.unit()
        for _ in range(n):
            out = out * elem
        return out

    report = []
    worst = 0.0
    for n in range(1, nmax_power + 1):
        cn = qint(n, p)
        c = 1.0 / (q - 1.0 / q)
        cases = [
            ("[E1, F1^n]",
             e1 * power(f1, n) - power(f1, n) * e1,
             (cn * c) * (power(f1, n - 1) * (q ** (-n + 1) * word(("K1", "K1")) - q ** (n - 1) * word(("K1inv", "K1inv"))))),
            ("[E1, [F2,F1]_q^n]",
             e1 * power(qc, n) - power(qc, n) * e1,
             (-cn * q ** (n - 2)) * (power(qc, n - 1) * word(("F2", "K1inv", "K1inv")))),
            ("[E2, F2^n]",
             e2 * power(f2, n) - power(f2, n) * e2,
             (cn * c) * (power(f2, n - 1) * (q ** (-n + 1) * word(("K2", "K2")) - q ** (n - 1) * word(("K2inv", "K2inv"))))),
            ("[E2, [F2,F1]_q^n]",
             e2 * power(qc, n) - power(qc, n) * e2,
             cn * (f1 * power(qc, n - 1) * word(("K2", "K2")))),
            ("F2 F1^n - q^-n F1^n F2",
             f2 * power(f1, n) - q ** (-n) * (power(f1, n) * f2),
             cn * (power(f1, n - 1) * qc)),
        ]
        for name, lhs, rhs in cases:
            lm = ualg.evaluate(lhs, label, p)
            rm = ualg.evaluate(rhs, label, p)
            scale = max(np.abs(rm).max(initial=0.0), 1.0)
            r = float(np.abs(lm - rm).max() / scale)
            worst = max(worst, r)
            report.append({"identity": name, "power": n, "residual": r, "passed": r < tol})
    return {"label": list(label), "max_residual": worst,
            "passed": all(e["passed"] for e in report), "relations": report}


# -- antiholomorphic 1-form membership ---------------------------------------

def form1_membership_report(vplus: PWVector, vminus: PWVector, p: QParam, tol: float = 1e-10) -> dict:
    """All conditions defining a 1-form doublet, by black action."""
    q = p.q
    gen = ualg.AlgebraElement.gen
    k1k22 = ualg.AlgebraElement.word(("K1", "K2", "K2"))

    def residual(got: PWVector, expect: PWVector) -> float:
        diff = dict(got)
        add_into(diff, expect, -1.0)
        return max((abs(c) for c in diff.values()), default=0.0)

    checks = [
        ("E1 v+ = 0", residual(black_act(gen("E1"), vplus, p), {})),
        ("E1 v- = v+", residual(black_act(gen("E1"), vminus, p), vplus)),
        ("F1 v+ = v-", residual(black_act(gen("F1"), vplus, p), vminus)),
        ("F1 v- = 0", residual(black_act(gen("F1"), vminus, p), {})),
        ("K1 v+ = q^1/2 v+", residual(black_act(gen("K1"), vplus, p), scaled(vplus, q**0.5))),
        ("K1 v- = q^-1/2 v-", residual(black_act(gen("K1"), vminus, p), scaled(vminus, q**-0.5))),
        ("K1K2^2 v+ = q^3/2 v+", residual(black_act(k1k22, vplus, p), scaled(vplus, q**1.5))),
        ("K1K2^2 v- = q^3/2 v-", residual(black_act(k1k22, vminus, p), scaled(vminus, q**1.5))),
    ]
    first_violation = next((name for name, r in checks if r >= tol), None)
    return {
        "passed": first_violation is None,
        "first_violation": first_violation,
        "residuals": dict(checks),
    }


def check_form1_membership(vplus: PWVector, vminus: PWVector, p: QParam, tol: float = 1e-10) -> bool:
    return form1_membership_report(vplus, vminus, p, tol)["passed"]
