"""Subproduct system and Toeplitz operators generated by a Motzkin pair.

The levelwise spaces H_k sit inside (C^n)^{(x) k}; each is carried as an
orthonormal coordinate frame so that all operator algebra happens in the
small compressed dimensions d_k rather than n^k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .config import (
    FULL_MATRIX_DIM,
    RANK_GAP,
    TOL_CHECK,
    TOL_CONSTRUCT,
    TOL_RANK,
    TOL_TOEPLITZ,
)
from .errors import LimitError, ParameterError, StructureError
from .qpoly import PhiFunction, dim_subproduct
from .representation import MotzkinPair, p_matrix

_SNAP_TOL = 1e-6


def _orthonormal_range(mat: np.ndarray, expected: int, tol: float, what: str):
    """Orthonormal columns spanning the column space of ``mat``.

    Sequential Gram-Schmidt over the columns in their given order, with a
    second orthogonalization pass on every accepted vector.  The count of
    accepted columns must come out to ``expected``.
    """
    norms = np.linalg.norm(mat, axis=0)
    thresh = tol * max(float(norms.max(initial=0.0)), 1e-300)
    cols: list[np.ndarray] = []
    for j in range(mat.shape[1]):
        v = mat[:, j].astype(complex)
        for b in cols:
            v = v - b * np.vdot(b, v)
        nv = np.linalg.norm(v)
        if nv <= thresh:
            continue
        v = v / nv
        for b in cols:
            v = v - b * np.vdot(b, v)
        v = v / np.linalg.norm(v)
        cols.append(v)
    if len(cols) != expected:
        raise StructureError(
            f"{what}: extracted {len(cols)} independent directions, "
            f"expected {expected}"
        )
    return np.stack(cols, axis=1)


class SubproductSystem:
    """Coordinate frames B_k for the levels H_k, k = 0 .. levels.

    B_k is an n^k x d_k isometry onto H_k, so the orthogonal projection is
    B_k B_k^*.  The recursion runs entirely in compressed coordinates: the
    level-(k+1) projection, conjugated into C^n (x) H_k, is

        (1 - P) (x) 1  -  phi(k) Y Y^*

    with P the rank-one projection onto the distinguished unit vector b and
    Y the compression of the pair vector acting on the two leftmost slots.
    """

    def __init__(self, pair: MotzkinPair, levels: int, *, tol: float = TOL_CONSTRUCT):
        if levels < 0:
            raise ParameterError(f"need levels >= 0, got {levels}")
        n = pair.n
        self.pair = pair
        self.levels = levels
        self.phi = PhiFunction(pair.lam)
        self.dims: list[int] = [1]
        self.bases: list[np.ndarray] = [np.ones((1, 1), dtype=complex)]
        self.hat_bases: list[np.ndarray | None] = [None]
        self.hat_projections: list[np.ndarray | None] = [None]
        self.idempotent_residuals: list[float] = [0.0]
        self.rounding_magnitudes: list[float] = [0.0]

        Q = np.eye(n) - p_matrix(pair)
        vA2 = pair.vA().reshape(n, n)
        for k in range(levels):
            d_k = self.dims[k]
            B_k = self.bases[k]
            G_hat = np.kron(Q, np.eye(d_k)).astype(complex)
            phik = self.phi(k)
            if phik:
                B3 = B_k.reshape(n, n ** (k - 1), d_k)
                Y = np.einsum("ip,pAr->irA", vA2, B3.conj())
                Y = Y.reshape(n * d_k, n ** (k - 1))
                G_hat -= float(phik) * (Y @ Y.conj().T)

            G_hat = (G_hat + G_hat.conj().T) / 2.0
            res = float(np.linalg.norm(G_hat @ G_hat - G_hat))
            self.idempotent_residuals.append(res)
            mag = 0.0
            if res > tol:
                evals, vecs = np.linalg.eigh(G_hat)
                snapped = np.round(evals.real)
                drift = np.abs(evals - snapped).max()
                if drift > _SNAP_TOL or not np.isin(snapped, (0.0, 1.0)).all():
                    raise StructureError(
                        f"level {k + 1}: compressed projection has spectrum "
                        f"away from {{0, 1}} (drift {drift:.3e})"
                    )
                mag = float(drift)
                G_hat = (vecs * snapped) @ vecs.conj().T
            self.rounding_magnitudes.append(mag)

            d_next = dim_subproduct(n, k + 1)
            B_hat = _orthonormal_range(
                G_hat, d_next, TOL_RANK, f"level {k + 1} basis"
            )
            B3 = B_hat.reshape(n, d_k, d_next)
            B_next = np.einsum("Ar,urs->uAs", B_k, B3)
            B_next = B_next.reshape(n ** (k + 1), d_next)

            self.dims.append(d_next)
            self.bases.append(B_next)
            self.hat_bases.append(B_hat)
            self.hat_projections.append(G_hat)

    # -- frames and projections ------------------------------------------

    def basis(self, k: int) -> np.ndarray:
        """The n^k x d_k isometry onto level k."""
        self._check_level(k)
        return self.bases[k]

    def projection(self, k: int) -> np.ndarray:
        """The full n^k x n^k orthogonal projection onto level k."""
        self._check_level(k)
        n = self.pair.n
        if n**k > FULL_MATRIX_DIM:
            raise LimitError(
                f"full projection at level {k} has size n**k = {n ** k}, "
                f"above the cap {FULL_MATRIX_DIM}"
            )
        B = self.bases[k]
        return B @ B.conj().T

    def compressed_projection(self, k: int) -> np.ndarray:
        """The projection at level k >= 1, conjugated into C^n (x) H_{k-1}."""
        self._check_level(k)
        if k == 0:
            raise ParameterError("level 0 has no compressed form")
        return self.hat_projections[k]

    def _check_level(self, k: int) -> None:
        if not 0 <= k <= self.levels:
            raise ParameterError(
                f"level {k} outside the built range 0..{self.levels}"
            )

    # -- Fock-space bookkeeping ------------------------------------------

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    def level_offsets(self) -> list[int]:
        offs = [0]
        for d in self.dims:
            offs.append(offs[-1] + d)
        return offs

    def level_projection(self, m: int) -> np.ndarray:
        self._check_level(m)
        offs = self.level_offsets()
        D = self.total_dimension
        E = np.zeros((D, D), dtype=complex)
        E[offs[m] : offs[m + 1], offs[m] : offs[m + 1]] = np.eye(self.dims[m])
        return E

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.total_dimension, dtype=complex)
        v[0] = 1.0
        return v

    # -- creation operators ----------------------------------------------

    def creation_blocks(self, u: np.ndarray) -> list[np.ndarray]:
        """Blocks of the creation operator of u: level k -> level k + 1.

        Block k is d_{k+1} x d_k; in level coordinates the operator sends
        xi to the compression of u (x) xi.
        """
        u = np.asarray(u, dtype=complex).reshape(self.pair.n)
        out = []
        for k in range(self.levels):
            lift = np.kron(u[:, None], np.eye(self.dims[k]))
            out.append(self.hat_bases[k + 1].conj().T @ lift)
        return out

    def toeplitz_matrix(self, u: np.ndarray) -> np.ndarray:
        """The creation operator of u on the truncated Fock space."""
        offs = self.level_offsets()
        D = self.total_dimension
        S = np.zeros((D, D), dtype=complex)
        for k, blk in enumerate(self.creation_blocks(u)):
            S[offs[k + 1] : offs[k + 2], offs[k] : offs[k + 1]] = blk
        return S


def build_subproduct(
    pair: MotzkinPair, levels: int, *, tol: float = TOL_CONSTRUCT
) -> SubproductSystem:
    return SubproductSystem(pair, levels, tol=tol)


def _as_system(
    source, levels: int | None = None, *, tol: float = TOL_CONSTRUCT
) -> SubproductSystem:
    """Pass a system through, or build one up to ``levels`` from a pair."""
    if isinstance(source, SubproductSystem):
        return source
    if levels is None:
        raise ParameterError("levels is required when starting from a pair")
    return SubproductSystem(source, levels, tol=tol)


def subproduct_projection(
    source: MotzkinPair | SubproductSystem, k: int, *, tol: float = TOL_CONSTRUCT
) -> np.ndarray:
    """The full n^k x n^k projection onto level k.

    Accepts either a built system or a bare pair (the levels up to k are
    then constructed on the spot).
    """
    return _as_system(source, k, tol=tol).projection(k)


def orthonormal_basis(
    source: MotzkinPair | SubproductSystem, k: int, *, tol: float = TOL_CONSTRUCT
) -> np.ndarray:
    """The n^k x d_k isometry whose columns span level k."""
    return _as_system(source, k, tol=tol).basis(k)


def projection_rank(system: SubproductSystem, k: int, *, gap: float = RANK_GAP):
    """(rank, spectral gap) of the level-k projection.

    The rank counts eigenvalues in decreasing order up to the first drop by
    a factor ``gap``; a projection of rank r shows eigenvalue 1 exactly r
    times, so the measured rank must agree with d_k.
    """
    if k == 0:
        return 1, float("inf")
    G = system.compressed_projection(k)
    evals = np.linalg.eigvalsh(G)[::-1]
    evals = np.clip(evals, 0.0, None)
    r = int(np.sum(evals > 0.5))
    if r < evals.size and evals[r] > 0:
        measured_gap = float(evals[r - 1] / evals[r])
    else:
        measured_gap = float("inf")
    if measured_gap < gap:
        raise StructureError(
            f"level {k}: no clear spectral gap (ratio {measured_gap:.3e})"
        )
    return r, measured_gap


def coassociativity_residuals(
    system: SubproductSystem, kmax: int | None = None
) -> dict[str, float]:
    """Residuals of (G_p (x) 1) G_k = G_k and (1 (x) G_q) G_k = G_k."""
    n = system.pair.n
    limit = system.levels
    while n**limit > FULL_MATRIX_DIM:
        limit -= 1
    if kmax is None:
        kmax = min(limit, 4)
    if kmax > limit:
        raise LimitError(
            f"full projections available up to level {limit}, asked for {kmax}"
        )
    out: dict[str, float] = {}
    for k in range(2, kmax + 1):
        G_k = system.projection(k)
        for p in range(1, k):
            q = k - p
            left = np.kron(system.projection(p), np.eye(n**q))
            right = np.kron(np.eye(n**p), system.projection(q))
            out[f"left[p={p},k={k}]"] = float(np.linalg.norm(left @ G_k - G_k))
            out[f"right[q={q},k={k}]"] = float(np.linalg.norm(right @ G_k - G_k))
    return out


# ---------------------------------------------------------------------------
# The distinguished operator family


@dataclass
class OperatorFamily:
    """The n - 1 creation-operator directions attached to a pair.

    Coordinates whose b-weight vanishes contribute plain basis vectors
    ("v" kind, labelled by their 1-based coordinate).  The support of b is
    a bar-closed orbit of size 2r carrying a discrete Fourier basis; the
    2r - 1 combinations orthogonal to b contribute the "w" kind, labelled
    by their frequency s = 1 .. 2r - 1.
    """

    n: int
    r: int
    j_list: list[int] = field(default_factory=list)  # 1-based orbit coordinates
    interior: list[int] = field(default_factory=list)  # 1-based, off the orbit
    labels: list[str] = field(default_factory=list)
    kinds: list[tuple[str, int]] = field(default_factory=list)
    vectors: np.ndarray | None = None

    def vector(self, kind: str, index: int) -> np.ndarray:
        return self.vectors[self.kinds.index((kind, index))]


def _orbit_phase(r: int, aexp) -> complex:
    return complex(np.exp(2j * np.pi * aexp / (2 * r)))


def operator_family(pair: MotzkinPair, *, tol: float = TOL_CHECK) -> OperatorFamily:
    """Read the operator family off the support pattern of b."""
    n = pair.n
    support = [i for i in range(n) if abs(pair.b[i]) > tol]
    if len(support) == 1:
        mid = support[0]
        if abs(pair.b[mid] - 1.0) > 1e-9:
            raise ParameterError("b concentrates on one coordinate but is not 1 there")
        fam = OperatorFamily(n=n, r=0)
        vecs = []
        for j in range(1, n + 1):
            if j - 1 == mid:
                continue
            v = np.zeros(n, dtype=complex)
            v[j - 1] = 1.0
            fam.interior.append(j)
            fam.labels.append(f"v{j}")
            fam.kinds.append(("v", j))
            vecs.append(v)
        fam.vectors = np.stack(vecs)
        return fam

    if len(support) % 2:
        raise ParameterError("support of b must be a single point or bar-symmetric")
    r = len(support) // 2
    expected = list(range(r)) + list(range(n - r, n))
    if support != expected:
        raise ParameterError(
            f"support of b is {support}, not the outer orbit {expected}"
        )
    if np.abs(pair.b[support] - 1.0 / np.sqrt(2 * r)).max() > 1e-9:
        raise ParameterError("b is not uniform over its orbit")

    fam = OperatorFamily(n=n, r=r)
    fam.j_list = [j + 1 for j in support]
    fam.interior = list(range(r + 1, n - r + 1))
    vecs = []
    for s in range(1, 2 * r):
        w = np.zeros(n, dtype=complex)
        for kpos, j in enumerate(fam.j_list, start=1):
            w[j - 1] = _orbit_phase(r, kpos * s) / np.sqrt(2 * r)
        fam.labels.append(f"w{s}")
        fam.kinds.append(("w", s))
        vecs.append(w)
    for j in fam.interior:
        v = np.zeros(n, dtype=complex)
        v[j - 1] = 1.0
        fam.labels.append(f"v{j}")
        fam.kinds.append(("v", j))
        vecs.append(v)
    fam.vectors = np.stack(vecs)

    gram = fam.vectors @ fam.vectors.conj().T
    if np.linalg.norm(gram - np.eye(n - 1)) > 1e-9:
        raise StructureError("operator family is not orthonormal")
    if np.abs(fam.vectors @ pair.b.conj()).max() > 1e-9:
        raise StructureError("operator family is not orthogonal to b")
    return fam


@dataclass
class ToeplitzOps:
    """The family's creation operators assembled on the truncated Fock space.

    ``matrices`` maps each family label to its full block-superdiagonal
    matrix.  Every report entry point in this module accepts either this
    bundle or the underlying system.
    """

    system: SubproductSystem
    family: OperatorFamily
    matrices: dict[str, np.ndarray]

    @property
    def pair(self) -> MotzkinPair:
        return self.system.pair

    @property
    def levels(self) -> int:
        return self.system.levels

    def matrix(self, label: str) -> np.ndarray:
        return self.matrices[label]

    def level_projection(self, m: int) -> np.ndarray:
        return self.system.level_projection(m)

    def vacuum(self) -> np.ndarray:
        return self.system.vacuum()


def creation_operators(
    source: MotzkinPair | SubproductSystem,
    levels: int | None = None,
    fam: OperatorFamily | None = None,
    *,
    tol: float = TOL_CONSTRUCT,
) -> ToeplitzOps:
    """Build the ToeplitzOps bundle for a pair or an existing system."""
    system = _as_system(source, levels, tol=tol)
    if fam is None:
        fam = operator_family(system.pair)
    matrices = {
        label: system.toeplitz_matrix(fam.vectors[idx])
        for idx, label in enumerate(fam.labels)
    }
    return ToeplitzOps(system=system, family=fam, matrices=matrices)


def _ops_args(system, fam):
    """Normalize a system-or-bundle first argument to (system, family)."""
    if isinstance(system, ToeplitzOps):
        return system.system, fam if fam is not None else system.family
    return system, fam


# ---------------------------------------------------------------------------
# Toeplitz relations


@dataclass
class ToeplitzReport:
    levels: int
    tol: float
    residuals: dict[str, float]
    skipped: list[str]

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tol

    def lines(self) -> list[str]:
        out = [f"{label}: {value:.3e}" for label, value in self.residuals.items()]
        out.extend(f"{label}: skipped (truncation)" for label in self.skipped)
        return out


def _family_blocks(system: SubproductSystem, fam: OperatorFamily):
    return {
        kind: system.creation_blocks(fam.vectors[idx])
        for idx, kind in enumerate(fam.kinds)
    }


def _bar(n: int, j: int) -> int:
    return n + 1 - j


def toeplitz_residuals(
    system: SubproductSystem | ToeplitzOps,
    fam: OperatorFamily | None = None,
    *,
    tol: float = TOL_TOEPLITZ,
) -> ToeplitzReport:
    """Frobenius residuals of the defining Toeplitz-operator relations.

    All relations are checked blockwise per level m of the truncated Fock
    space; compositions that would leave the truncation are dropped from
    the level range, and the range-sum relation at the top level is
    reported as skipped rather than silently tested against a cut-off sum.
    """
    system, fam = _ops_args(system, fam)
    pair = system.pair
    n, N = pair.n, system.levels
    if fam is None:
        fam = operator_family(pair)
    phi = system.phi
    lam = float(pair.lam)
    a = pair.a
    blocks = _family_blocks(system, fam)
    res: dict[str, float] = {}
    skipped: list[str] = []

    # Covariance with the level grading: f S = S (f o shift) for the level
    # indicators and for one strictly positive weight function.
    S_full = [system.toeplitz_matrix(v) for v in fam.vectors]
    worst = 0.0
    for m in range(N + 1):
        E = system.level_projection(m)
        E_prev = system.level_projection(m - 1) if m else None
        for S in S_full:
            lhs = E @ S
            rhs = S @ E_prev if m else np.zeros_like(lhs)
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    res["eq1[levels]"] = worst
    offs = system.level_offsets()
    weight = np.concatenate(
        [
            np.full(system.dims[m], 1.0 + 1.0 / ((1 + n) * (1 + m)))
            for m in range(N + 1)
        ]
    )
    shifted = np.concatenate(
        [
            np.full(system.dims[m], 1.0 + 1.0 / ((1 + n) * (2 + m)))
            for m in range(N + 1)
        ]
    )
    worst = 0.0
    for S in S_full:
        worst = max(
            worst,
            float(np.linalg.norm(weight[:, None] * S - S * shifted[None, :])),
        )
    res["eq1[weight]"] = worst

    # Range sum: sum_i S_i S_i^* is the identity off the vacuum.
    for m in range(N):
        if m == 0:
            lhs = np.zeros((1, 1), dtype=complex)
            rhs = np.zeros((1, 1), dtype=complex)
        else:
            lhs = sum(bl[m - 1] @ bl[m - 1].conj().T for bl in blocks.values())
            rhs = np.eye(system.dims[m])
        res[f"eq2[m={m}]"] = float(np.linalg.norm(lhs - rhs))
    skipped.append(f"eq2[m={N}]")

    # The quadratic syzygy: the weighted two-step composition vanishes.
    a1 = a[fam.j_list[0] - 1] if fam.r else 0.0
    for m in range(N - 1):
        acc = np.zeros((system.dims[m + 2], system.dims[m]), dtype=complex)
        for s in range(1, 2 * fam.r):
            wb = blocks[("w", s)]
            acc += a1 * _orbit_phase(fam.r, -s) * (wb[m + 1] @ wb[m])
        for j in fam.interior:
            acc += a[j - 1] * (blocks[("v", j)][m + 1] @ blocks[("v", _bar(n, j))][m])
        res[f"eq3[m={m}]"] = float(np.linalg.norm(acc))

    # Commutation relations between annihilation and creation parts.
    def down_up(kind_left, kind_right, m):
        if m == 0:
            return 0.0
        bl = blocks[kind_left][m - 1]
        br = blocks[kind_right][m - 1]
        return bl @ br.conj().T

    for m in range(N):
        phim = float(phi(m))
        eye_m = np.eye(system.dims[m])
        for j in fam.interior:
            for i in fam.interior:
                lhs = blocks[("v", j)][m].conj().T @ blocks[("v", i)][m]
                rhs = (i == j) * eye_m - phim * np.conj(a[i - 1]) * a[
                    j - 1
                ] * down_up(("v", _bar(n, j)), ("v", _bar(n, i)), m)
                res[f"eq4[i={i},j={j},m={m}]"] = float(np.linalg.norm(lhs - rhs))
        for j in fam.interior:
            for s in range(1, 2 * fam.r):
                js = fam.j_list[s - 1]
                lhs = blocks[("v", j)][m].conj().T @ blocks[("w", s)][m]
                rhs = (
                    -phim
                    * np.conj(a[js - 1])
                    * a[j - 1]
                    * _orbit_phase(fam.r, s)
                    * down_up(("v", _bar(n, j)), ("w", s), m)
                )
                res[f"eq5[j={j},s={s},m={m}]"] = float(np.linalg.norm(lhs - rhs))
        for s in range(1, 2 * fam.r):
            for sp in range(1, 2 * fam.r):
                lhs = blocks[("w", sp)][m].conj().T @ blocks[("w", s)][m]
                rhs = (s == sp) * eye_m - phim * lam * _orbit_phase(
                    fam.r, s - sp
                ) * down_up(("w", s), ("w", sp), m)
                res[f"eq6[s={s},s'={sp},m={m}]"] = float(np.linalg.norm(lhs - rhs))

    return ToeplitzReport(levels=N, tol=tol, residuals=res, skipped=skipped)


# ---------------------------------------------------------------------------
# Matrix units spanned by vacuum words


@dataclass
class MatrixUnitReport:
    k: int
    space_dim: int
    rank: int
    expected: int
    measured: int

    @property
    def ok(self) -> bool:
        return self.measured == self.expected


def word_vectors(
    system: SubproductSystem, fam: OperatorFamily, k: int
) -> np.ndarray:
    """Level-k coordinates of all words of length k applied to the vacuum.

    Column order is lexicographic in the word, leftmost letter most
    significant; letters are positions in ``fam.labels``.
    """
    system._check_level(k)
    count = len(fam.labels)
    if count**k > 2048:
        raise LimitError(
            f"{count ** k} words at length {k}, above the cap 2048"
        )
    blocks = [system.creation_blocks(v) for v in fam.vectors]
    psi = np.ones((1, 1), dtype=complex)
    for level in range(k):
        psi = np.hstack([blocks[i][level] @ psi for i in range(count)])
    return psi


def matrix_unit_dimension(
    system: SubproductSystem | ToeplitzOps,
    k: int,
    fam: OperatorFamily | None = None,
    *,
    tol: float = TOL_RANK,
) -> MatrixUnitReport:
    """Dimension of the span of outer products of vacuum words at level k.

    The words psi_alpha span all of H_k, so the outer products
    psi_alpha psi_beta^* span the full matrix algebra on it: the measured
    value is rank(Psi)^2 against the expected d_k^2.
    """
    system, fam = _ops_args(system, fam)
    if fam is None:
        fam = operator_family(system.pair)
    psi = word_vectors(system, fam, k)
    if k == 0:
        rank = 1
    else:
        svals = np.linalg.svd(psi, compute_uv=False)
        rank = int(np.sum(svals > tol * svals[0]))
    d_k = system.dims[k]
    return MatrixUnitReport(
        k=k,
        space_dim=d_k,
        rank=rank,
        expected=d_k * d_k,
        measured=rank * rank,
    )


def gauge_average(
    system: SubproductSystem | ToeplitzOps, X: np.ndarray
) -> np.ndarray:
    """Keep only the level-diagonal blocks of a Fock-space operator."""
    system, _ = _ops_args(system, None)
    D = system.total_dimension
    X = np.asarray(X, dtype=complex)
    if X.shape != (D, D):
        raise ParameterError(f"operator shape {X.shape} does not match ({D}, {D})")
    out = np.zeros_like(X)
    offs = system.level_offsets()
    for m in range(system.levels + 1):
        sl = slice(offs[m], offs[m + 1])
        out[sl, sl] = X[sl, sl]
    return out


# ---------------------------------------------------------------------------
# The reverse-weighted identity


@dataclass
class ReverseIdentityReport:
    k: int
    constant: Fraction
    closed_form: float
    closed_form_error: float
    residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.residual < self.tol and self.closed_form_error < self.tol


def reverse_identity(
    system: SubproductSystem | ToeplitzOps,
    k: int,
    fam: OperatorFamily | None = None,
    *,
    tol: float = TOL_CHECK,
) -> ReverseIdentityReport:
    """sum_i |a_ibar|^2 S_i^* S_i = (1 - lam - lam^2 phi(k-1)) at level k - 1.

    Each operator direction carries the squared a-modulus of the bar of its
    home coordinate (the Fourier directions sit on the orbit, where that
    modulus is lam).  The exact rational constant is also compared against
    its closed form lam (q^{k+1} - q^{-k-1}) / (q^k - q^{-k}), which reads
    lam (k+1)/k in the q -> 1 limit.
    """
    system, fam = _ops_args(system, fam)
    if not 1 <= k <= system.levels:
        raise ParameterError(f"need 1 <= k <= {system.levels}, got {k}")
    pair = system.pair
    if fam is None:
        fam = operator_family(pair)
    n = pair.n
    acc = np.zeros((system.dims[k - 1],) * 2, dtype=complex)
    for idx, (kind, label) in enumerate(fam.kinds):
        home = label if kind == "v" else fam.j_list[label - 1]
        weight = abs(pair.a[_bar(n, home) - 1]) ** 2
        blk = system.creation_blocks(fam.vectors[idx])[k - 1]
        acc += weight * (blk.conj().T @ blk)
    lam = pair.lam if isinstance(pair.lam, Fraction) else Fraction(pair.lam)
    constant = 1 - lam - lam * lam * system.phi(k - 1)
    q = system.phi.q
    if abs(q - 1.0) < 1e-12:
        closed = float(lam) * (k + 1) / k
    else:
        closed = float(lam) * (q ** (k + 1) - q ** (-k - 1)) / (q**k - q**-k)
    residual = float(
        np.linalg.norm(acc - float(constant) * np.eye(system.dims[k - 1]))
    )
    return ReverseIdentityReport(
        k=k,
        constant=constant,
        closed_form=closed,
        closed_form_error=abs(float(constant) - closed),
        residual=residual,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# The generator of the defining ideal at degree two


@dataclass
class IdealReport:
    vector: np.ndarray
    norm: float
    alignment: float
    annihilation: float
    complement: float
    tol: float

    @property
    def ok(self) -> bool:
        return max(self.alignment, self.annihilation, self.complement) < self.tol


def ideal_generator(
    system: MotzkinPair | SubproductSystem | ToeplitzOps,
    fam: OperatorFamily | None = None,
    *,
    tol: float = TOL_CHECK,
) -> IdealReport:
    """The degree-two vector cutting H_2 out of H_1 (x) H_1.

    Assembled from the operator family; the report checks that it equals
    the pair vector compressed off b on both slots, that the level-2
    projection kills it, and that H_2 is exactly the orthogonal complement
    of its line inside H_1 (x) H_1.  A bare pair is accepted, in which case
    the two levels needed for the checks are built here.
    """
    system, fam = _ops_args(system, fam)
    if isinstance(system, MotzkinPair):
        system = SubproductSystem(system, 2)
    pair = system.pair
    if system.levels < 2:
        raise ParameterError("need at least two levels")
    if fam is None:
        fam = operator_family(pair)
    n = pair.n
    a = pair.a
    xi = np.zeros(n * n, dtype=complex)
    if fam.r:
        a1 = a[fam.j_list[0] - 1]
        for s in range(1, 2 * fam.r):
            w = fam.vector("w", s)
            xi += a1 * _orbit_phase(fam.r, -s) * np.kron(w, w)
    for j in fam.interior:
        xi += a[j - 1] * np.kron(fam.vector("v", j), fam.vector("v", _bar(n, j)))

    Q = np.eye(n) - p_matrix(pair)
    compressed = np.kron(Q, Q) @ pair.vA()
    alignment = float(np.linalg.norm(xi - compressed))

    G2 = system.projection(2)
    annihilation = float(np.linalg.norm(G2 @ xi))

    xin = xi / np.linalg.norm(xi)
    complement = float(
        np.linalg.norm(G2 - (np.kron(Q, Q) - np.outer(xin, xin.conj())))
    )
    return IdealReport(
        vector=xi,
        norm=float(np.linalg.norm(xi)),
        alignment=alignment,
        annihilation=annihilation,
        complement=complement,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Distance to the relations with the limiting coefficient


@dataclass
class AsymptoticReport:
    level: int
    residuals: dict[str, float]
    defect: float

    @property
    def residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def ratio(self) -> float:
        return self.residual / self.defect if self.defect else float("inf")


def cuntz_pimsner_residual(
    system: SubproductSystem | ToeplitzOps,
    m: int,
    fam: OperatorFamily | None = None,
) -> AsymptoticReport:
    """Residuals at level m of the commutation relations with phi replaced
    by its limit phi_inf.

    The exact relations hold with the level-dependent phi(m); substituting
    the limit leaves an error controlled by |phi(m) - phi_inf|, which decays
    in m, so the creation operators satisfy the limiting relations
    asymptotically.
    """
    system, fam = _ops_args(system, fam)
    pair = system.pair
    n = pair.n
    if fam is None:
        fam = operator_family(pair)
    if not 1 <= m <= system.levels - 1:
        raise ParameterError(
            f"need 1 <= m <= {system.levels - 1}, got {m}"
        )
    a = pair.a
    lam = float(pair.lam)
    phi_inf = system.phi.infinity
    blocks = _family_blocks(system, fam)
    eye_m = np.eye(system.dims[m])
    res: dict[str, float] = {}

    def down_up(kind_left, kind_right):
        return blocks[kind_left][m - 1] @ blocks[kind_right][m - 1].conj().T

    for j in fam.interior:
        for i in fam.interior:
            lhs = blocks[("v", j)][m].conj().T @ blocks[("v", i)][m]
            rhs = (i == j) * eye_m - phi_inf * np.conj(a[i - 1]) * a[
                j - 1
            ] * down_up(("v", _bar(n, j)), ("v", _bar(n, i)))
            res[f"eq4o[i={i},j={j}]"] = float(np.linalg.norm(lhs - rhs))
    for j in fam.interior:
        for s in range(1, 2 * fam.r):
            js = fam.j_list[s - 1]
            lhs = blocks[("v", j)][m].conj().T @ blocks[("w", s)][m]
            rhs = (
                -phi_inf
                * np.conj(a[js - 1])
                * a[j - 1]
                * _orbit_phase(fam.r, s)
                * down_up(("v", _bar(n, j)), ("w", s))
            )
            res[f"eq5o[j={j},s={s}]"] = float(np.linalg.norm(lhs - rhs))
    for s in range(1, 2 * fam.r):
        for sp in range(1, 2 * fam.r):
            lhs = blocks[("w", sp)][m].conj().T @ blocks[("w", s)][m]
            rhs = (s == sp) * eye_m - phi_inf * lam * _orbit_phase(
                fam.r, s - sp
            ) * down_up(("w", s), ("w", sp))
            res[f"eq6o[s={s},s'={sp}]"] = float(np.linalg.norm(lhs - rhs))

    defect = abs(float(system.phi(m)) - phi_inf)
    return AsymptoticReport(level=m, residuals=res, defect=defect)
