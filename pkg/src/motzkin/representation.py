"""Operators on tensor powers built from a Motzkin pair.

A Motzkin pair over C^n consists of a vector v_A = sum_i a_i v_i (x) v_ibar
in C^n (x) C^n and a unit vector v = sum_i b_i v_i, where ibar = n+1-i,
subject to

    conj(a_i) a_ibar = lam       for every i,
    ||a|| = ||b|| = 1,
    conj(a_j) conj(b_i) b_jbar = conj(a_ibar) conj(b_j) b_ibar   for all i, j.

Such a pair turns the diagram generators into concrete matrices: p becomes
the rank-one projection onto v, t the rank-one projection onto v_A, and l
routes its through strand while capping the free column with v.  Inner
products are linear in the first variable throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import TOL_CHECK, TOL_CONSTRUCT, TOL_RANK, max_rep_dimension
from .diagram_core import (
    Element,
    MotzkinDiagram,
    presentation_relations,
)
from .errors import (
    LimitError,
    ParameterError,
    StructureError,
    UnsupportedDiagramError,
)
from .qpoly import validate_lam


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass
class MotzkinPair:
    """The data (n, lam, a, b) of a Motzkin pair; arrays are complex."""

    n: int
    lam: Fraction
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.lam = validate_lam(self.lam)
        self.a = np.asarray(self.a, dtype=complex).reshape(-1)
        self.b = np.asarray(self.b, dtype=complex).reshape(-1)
        if self.n < 2:
            raise ParameterError(f"need n >= 2, got {self.n}")
        if self.a.shape != (self.n,) or self.b.shape != (self.n,):
            raise ParameterError("a and b must both have length n")

    def bar(self, i: int) -> int:
        """The index reversal i -> n-1-i (0-based)."""
        return self.n - 1 - i

    def vA(self) -> np.ndarray:
        """The vector sum_i a_i e_i (x) e_ibar, as a length n**2 array."""
        m = np.zeros((self.n, self.n), dtype=complex)
        for i in range(self.n):
            m[i, self.bar(i)] = self.a[i]
        return m.reshape(-1)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": str(self.lam),
            "a": [[float(z.real), float(z.imag)] for z in self.a],
            "b": [[float(z.real), float(z.imag)] for z in self.b],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MotzkinPair":
        a = np.array([complex(re, im) for re, im in data["a"]])
        b = np.array([complex(re, im) for re, im in data["b"]])
        return cls(n=int(data["n"]), lam=Fraction(data["lambda"]), a=a, b=b)


@dataclass
class PairReport:
    """Residuals of the defining and derived conditions of a pair."""

    norm_a: float
    norm_b: float
    pairing: float            # max_i |conj(a_i) a_ibar - lam|
    compatibility: float      # the (i, j) condition linking a and b
    modulus_symmetry: float   # max_j ||b_j| - |b_jbar||
    a_symmetry_on_support: float
    weighted_sum: float       # |sum_k conj(a_kbar) a_k |b_k|^2 - lam|
    extended: float           # the triple-index consequence
    tol: float

    @property
    def ok(self) -> bool:
        return (
            max(
                self.norm_a,
                self.norm_b,
                self.pairing,
                self.compatibility,
                self.modulus_symmetry,
                self.a_symmetry_on_support,
                self.weighted_sum,
                self.extended,
            )
            <= self.tol
        )


def validate_pair(pair: MotzkinPair, tol: float = TOL_CONSTRUCT) -> PairReport:
    n, lam = pair.n, float(pair.lam)
    a, b = pair.a, pair.b
    bar = pair.bar
    abar = a[::-1]

    norm_a = abs(np.vdot(a, a).real - 1.0)
    norm_b = abs(np.vdot(b, b).real - 1.0)
    pairing = float(np.abs(a.conj() * abar - lam).max())

    compat = 0.0
    for i in range(n):
        for j in range(n):
            lhs = a[j].conj() * b[i].conj() * b[bar(j)]
            rhs = a[bar(i)].conj() * b[j].conj() * b[bar(i)]
            compat = max(compat, abs(lhs - rhs))

    modulus = float(np.abs(np.abs(b) - np.abs(b[::-1])).max())

    support = np.abs(b) > tol
    a_sym = 0.0
    for j in range(n):
        if support[j]:
            a_sym = max(a_sym, abs(a[j] - a[bar(j)]))

    weighted = abs(np.sum(abar.conj() * a * np.abs(b) ** 2) - lam)

    extended = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = lam * a[i].conj() * b[k].conj() * b[bar(i)]
                rhs = (
                    a[j].conj()
                    * a[bar(j)]
                    * a[bar(k)].conj()
                    * b[i].conj()
                    * b[bar(k)]
                )
                extended = max(extended, abs(lhs - rhs))

    return PairReport(
        norm_a=norm_a,
        norm_b=norm_b,
        pairing=pairing,
        compatibility=compat,
        modulus_symmetry=modulus,
        a_symmetry_on_support=a_sym,
        weighted_sum=float(weighted),
        extended=extended,
        tol=tol,
    )


def build_example_pair(family: str, n: int, r: int = 0, lam=Fraction(1, 4)) -> MotzkinPair:
    """Construct one of the standard families of Motzkin pairs.

    family "i":   n odd, v concentrated on the middle coordinate (r ignored).
    family "ii":  r = 1, v spread over the two extreme coordinates.
    family "iii": general 1 <= r <= n/2, v uniform over the first and last
                  r coordinates.

    The a-vector is real positive: sqrt(lam) on the support of v (and on a
    self-paired middle index), and on each remaining orbit {i, ibar} the
    larger root y of y + lam**2/y = budget, with the budget spread evenly.
    """
    lam = validate_lam(lam)
    lamf = float(lam)
    if family not in ("i", "ii", "iii"):
        raise ParameterError(f"unknown family {family!r}")
    if n < 2:
        raise ParameterError(f"need n >= 2, got {n}")

    if family == "i":
        if n % 2 == 0:
            raise ParameterError("family i needs odd n")
        if r not in (0, None):
            raise ParameterError("family i does not take r")
        r = 0
    else:
        if family == "ii":
            if r in (0, None):
                r = 1
            if r != 1:
                raise ParameterError("family ii means r = 1")
        if not 1 <= r <= n // 2:
            raise ParameterError(f"need 1 <= r <= n/2, got r={r}")

    b = np.zeros(n, dtype=complex)
    if family == "i":
        b[(n - 1) // 2] = 1.0
    else:
        b[:r] = 1.0 / np.sqrt(2 * r)
        b[n - r:] = 1.0 / np.sqrt(2 * r)

    a = np.zeros(n, dtype=complex)
    sqlam = np.sqrt(lamf)
    a[:r] = sqlam
    if r:
        a[n - r:] = sqlam
    middle_self = None
    if n % 2 == 1:
        middle_self = (n - 1) // 2
        a[middle_self] = sqlam

    # Indices r .. n-r-1 excluding a self-paired middle form bar-orbits.
    # The budget arithmetic is exact so that a boundary case (budget equal
    # to 2*lam, a double root) does not pick up square-root noise.
    left = [i for i in range(r, (n - (n % 2)) // 2) if i != middle_self]
    npairs = len(left)
    used = 2 * r * lam + (lam if middle_self is not None else 0)
    if npairs == 0:
        if used != 1:
            raise ParameterError(
                f"no free orbits and the fixed moduli sum to {used}, not 1"
            )
    else:
        budget = Fraction(1 - used, npairs)
        disc = budget * budget - 4 * lam * lam
        if disc < 0:
            raise ParameterError(
                f"infeasible parameters: each free orbit would get {budget}, "
                f"but needs at least {2 * lam}"
            )
        y = (float(budget) + np.sqrt(float(disc))) / 2.0
        for i in left:
            a[i] = np.sqrt(y)
            a[n - 1 - i] = lamf / np.sqrt(y)

    return MotzkinPair(n=n, lam=lam, a=a, b=b)


# ---------------------------------------------------------------------------
# Generator matrices


def _check_dim(n: int, k: int) -> int:
    dim = n**k
    if dim > max_rep_dimension():
        raise LimitError(
            f"dimension n**k = {dim} exceeds the configured bound "
            f"{max_rep_dimension()} (raise MOTZKIN_MAX_DIM to override)"
        )
    return dim


def p_matrix(pair: MotzkinPair) -> np.ndarray:
    """Rank-one projection onto v on C^n."""
    return np.outer(pair.b, pair.b.conj())


def t_matrix(pair: MotzkinPair) -> np.ndarray:
    """Rank-one projection onto v_A on C^n (x) C^n."""
    vA = pair.vA()
    return np.outer(vA, vA.conj())


def l_matrix(pair: MotzkinPair) -> np.ndarray:
    """The two-column matrix of l: routes the second slot to the first and
    caps the free ends with v."""
    n = pair.n
    L = np.zeros((n * n, n * n), dtype=complex)
    Lr = L.reshape(n, n, n, n)
    P = p_matrix(pair)
    for j in range(n):
        Lr[j, :, :, j] = P
    return L


def generator_operator(pair: MotzkinPair, k: int, name: str, i: int | None = None) -> np.ndarray:
    """The matrix of the generator on the k-fold tensor power of C^n."""
    n = pair.n
    _check_dim(n, k)
    if name == "id":
        return np.eye(n**k, dtype=complex)
    if i is None:
        raise ParameterError(f"generator {name!r} needs an index")
    if name == "p":
        if not 1 <= i <= k:
            raise ParameterError(f"index {i} of 'p' out of range 1..{k}")
        base, sites = p_matrix(pair), 1
    elif name in ("l", "r", "t"):
        if not 1 <= i <= k - 1:
            raise ParameterError(f"index {i} of {name!r} out of range 1..{k - 1}")
        sites = 2
        if name == "t":
            # t is lam times the bare cup-cap; evaluated, that is exactly
            # the rank-one projection onto v_A.
            base = t_matrix(pair)
        else:
            base = l_matrix(pair)
            if name == "r":
                base = base.conj().T
    else:
        raise ParameterError(f"unknown generator {name!r}")
    left = np.eye(n ** (i - 1), dtype=complex)
    right = np.eye(n ** (k - i - sites + 1), dtype=complex)
    return np.kron(np.kron(left, base), right)


def _parse_word_token(token) -> tuple[str, int | None, bool]:
    if isinstance(token, tuple):
        if len(token) == 2:
            return (token[0], token[1], False)
        return token
    s = str(token)
    dag = s.endswith("'")
    if dag:
        s = s[:-1]
    name = s.rstrip("0123456789")
    digits = s[len(name):]
    return (name, int(digits) if digits else None, dag)


def evaluate_word(pair: MotzkinPair, k: int, word) -> np.ndarray:
    """Product of generator matrices; tokens like "l1", "t2", "p1'", "id",
    or tuples (name, index)."""
    out = np.eye(pair.n**k, dtype=complex)
    for token in word:
        name, idx, dag = _parse_word_token(token)
        m = generator_operator(pair, k, name, idx)
        if dag:
            m = m.conj().T
        out = out @ m
    return out


# ---------------------------------------------------------------------------
# Direct diagram evaluation


def _row_arcs(pairing, lo, hi):
    return [
        (i, pairing[i])
        for i in range(lo, hi)
        if lo <= pairing[i] < hi and pairing[i] > i
    ]


def _max_nesting(arcs) -> int:
    depth = 0
    for (s, e) in arcs:
        d = sum(1 for (s2, e2) in arcs if s2 < s and e < e2)
        depth = max(depth, d)
    return depth


def evaluate_diagram(pair: MotzkinPair, diagram: MotzkinDiagram) -> np.ndarray:
    """The matrix of a single diagram, assembled from its strand features.

    Supports nesting depth at most one per edge row (an arc may sit over
    isolated points and innermost arcs only); deeper nesting raises
    UnsupportedDiagramError.
    """
    n, k = pair.n, diagram.width
    _check_dim(n, k)
    p = diagram.pairing
    top_arcs = _row_arcs(p, 0, k)
    bottom_arcs = _row_arcs(p, k, 2 * k)
    if _max_nesting(top_arcs) > 1 or _max_nesting(bottom_arcs) > 1:
        raise UnsupportedDiagramError(
            f"diagram {list(p)} nests arcs more than one level deep"
        )

    lam = float(pair.lam)
    root = lam**-0.5
    vA2 = pair.vA().reshape(n, n)
    shape = (n,) * (2 * k)
    X = np.ones(shape, dtype=complex)

    def mul_axes(arr, axes):
        target = [1] * (2 * k)
        for ax in axes:
            target[ax] = n
        X_view = arr.reshape(target)
        return X_view

    out = X
    for i in range(k):
        j = p[i]
        if j == -1:
            out = out * mul_axes(pair.b, [i])
        elif j >= k:
            out = out * mul_axes(np.eye(n), [i, j])
        elif j > i:
            out = out * mul_axes(root * vA2, [i, j])
    for i in range(k, 2 * k):
        j = p[i]
        if j == -1:
            out = out * mul_axes(pair.b.conj(), [i])
        elif j > i:
            out = out * mul_axes(root * vA2.conj(), [i, j])
    return out.reshape(n**k, n**k)


def evaluate_element(pair: MotzkinPair, x: Element) -> np.ndarray:
    """Linear extension of evaluate_diagram (coefficients become floats)."""
    n, k = pair.n, x.width
    out = np.zeros((n**k, n**k), dtype=complex)
    for d, c in x.terms.items():
        out += float(c) * evaluate_diagram(pair, d)
    return out


# ---------------------------------------------------------------------------
# Relation residuals and spanning dimension


def _word_matrix(pair, k, word, cache):
    out = np.eye(pair.n**k, dtype=complex)
    for token in word:
        if token[0] == "adj":
            m = _word_matrix(pair, k, token[1], cache)
            out = out @ m.conj().T
            continue
        name, idx, dag = token
        key = (name, idx)
        if key not in cache:
            cache[key] = generator_operator(pair, k, name, idx)
        m = cache[key]
        if dag:
            m = m.conj().T
        out = out @ m
    return out


def relation_residuals(pair: MotzkinPair, k: int) -> dict[str, float]:
    """Frobenius residual of every defining relation instance at width k."""
    lam = float(pair.lam)
    cache: dict = {}
    out: dict[str, float] = {}
    for label, lhs, rhs in presentation_relations(k):
        total = np.zeros((pair.n**k, pair.n**k), dtype=complex)
        for power, word in lhs:
            total += lam**power * _word_matrix(pair, k, word, cache)
        for power, word in rhs:
            total -= lam**power * _word_matrix(pair, k, word, cache)
        out[label] = float(np.linalg.norm(total))
    return out


def span_dimension(
    pair: MotzkinPair,
    k: int,
    tol: float = TOL_RANK,
    max_rounds: int = 12,
) -> tuple[int, int]:
    """Dimension of the algebra generated by the generator matrices at
    width k, found by closing the span under left multiplication.

    Returns (dimension, rounds), where `rounds` counts the closure sweeps
    needed before the span stops growing.
    """
    n = pair.n
    dim = _check_dim(n, k)
    gens = [np.eye(dim, dtype=complex)]
    for i in range(1, k):
        for name in ("l", "r", "t"):
            gens.append(generator_operator(pair, k, name, i))
    for i in range(1, k + 1):
        gens.append(generator_operator(pair, k, "p", i))

    basis: list[np.ndarray] = []      # orthonormal vectorised operators
    members: list[np.ndarray] = []    # the matrices they came from

    def try_add(candidates: list[np.ndarray]) -> int:
        vecs = [c.reshape(-1) for c in candidates]
        norms = [float(np.linalg.norm(v)) for v in vecs]
        scale = max(norms) if norms else 1.0
        added = 0
        residuals = []
        for v in vecs:
            w = v.copy()
            for q in basis:
                w -= np.vdot(q, w) * q
            residuals.append(w)
        live = list(range(len(vecs)))
        while live:
            pick = max(live, key=lambda idx: (np.linalg.norm(residuals[idx]), -idx))
            w = residuals[pick]
            nw = float(np.linalg.norm(w))
            if nw <= tol * scale:
                break
            q = w / nw
            basis.append(q)
            members.append(candidates[pick])
            added += 1
            live.remove(pick)
            for idx in live:
                residuals[idx] = residuals[idx] - np.vdot(q, residuals[idx]) * q
        return added

    try_add(gens)
    rounds = 0
    while rounds < max_rounds:
        rounds += 1
        new = [g @ m for g in gens[1:] for m in list(members)]
        if try_add(new) == 0:
            break
    else:
        raise LimitError(f"span did not stabilise in {max_rounds} rounds")
    return len(basis), rounds


# ---------------------------------------------------------------------------
# Conditional expectation on the operator side


def rep_conditional_expectation(
    pair: MotzkinPair,
    X: np.ndarray,
    tol: float = TOL_CHECK,
) -> np.ndarray:
    """Push an operator on the (k+1)-fold power down to the k-fold power.

    Sandwiching X (x) 1 between t on the last two slots and p on the last
    slot factorises as what (x) P (x) P; the structural factorisation is
    verified and `what / lam` is returned, matching the diagram-side
    conditional expectation under evaluation.
    """
    n = pair.n
    lam = float(pair.lam)
    dim = X.shape[0]
    k = round(np.log(dim) / np.log(n)) - 1
    if n ** (k + 1) != dim or X.shape != (dim, dim):
        raise ParameterError(f"operator shape {X.shape} is not a power of n={n}")
    _check_dim(n, k + 2)

    P = p_matrix(pair)
    T = t_matrix(pair)
    eye = lambda m: np.eye(m, dtype=complex)
    X1 = np.kron(X, eye(n))
    T2 = np.kron(eye(n**k), T)
    P2 = np.kron(eye(n ** (k + 1)), P)
    Z = P2 @ T2 @ X1 @ T2 @ P2

    dk = n**k
    Zr = Z.reshape(dk, n, n, dk, n, n)
    b = pair.b
    what = np.einsum(
        "s,t,IstJuv,u,v->IJ",
        b.conj(), b.conj(), Zr, b, b, optimize=True,
    )
    rebuilt = np.kron(np.kron(what, P), P)
    residual = float(np.linalg.norm(Z - rebuilt))
    scale = max(1.0, float(np.linalg.norm(Z)))
    if residual > tol * scale:
        raise StructureError(
            f"sandwich did not factor through the last two slots "
            f"(residual {residual:.3e})"
        )
    return what / lam
