"""Verifiers for the strong properties SSP, SMP, SAP, and nSSP.

Each property asserts that X = O is the only matrix in a
pattern-constrained subspace satisfying certain linear equations in a
base matrix A.  Every verifier runs two independent routes and demands
agreement:

primal
    Assemble the linear map X -> (equations) column by column over an
    orthonormal basis of the constrained subspace and compute its
    nullspace; the property holds iff the nullspace is trivial, and any
    nullspace vector is a concrete witness of failure.
dual
    The property holds iff a sum of explicit subspaces spans the whole
    ambient space (closed pattern class plus a commutator/congruence
    range, plus the span of matrix powers for the SMP); check by rank.

A primal/dual mismatch raises :class:`InternalCheckError` - it would mean
the two rank decisions disagree, which the shared tolerance policy is
meant to prevent.

Inputs are normalized to unit Frobenius norm internally (all four
properties are invariant under nonzero scaling), so verdicts do not
depend on the scale of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InternalCheckError
from .numerics import (
    DEFAULT_TOL,
    Tolerances,
    as_matrix,
    fro,
    nullspace,
    rank,
    require_square,
    sym_eig,
    symmetrize,
)
from .patterns import (
    Graph,
    PatternBasis,
    SignPattern,
    cell_basis,
    cluster_eigenvalues,
    edge_span_basis,
    full_basis,
    graph_closure_basis,
    matrix_in_graph_class,
    matrix_in_sign_class,
    sign_tangent_basis,
    skew_basis,
)

WITNESS_RESIDUAL_SCALE = 1e-8


@dataclass(frozen=True, eq=False)
class StrongPropertyReport:
    """Outcome of one strong-property verification.

    ``holds`` iff the primal nullspace is trivial; ``dual_verdict`` is the
    independent subspace-span result and always agrees.  When the property
    fails, ``witness`` is a unit-Frobenius-norm nonzero solution of the
    defining equations and ``witness_residual`` the norm of its equation
    images (relative to ||A||_F).  ``smallest_structural_singular_value``
    is the smallest singular value of the primal system, i.e. the margin
    by which the verdict clears the rank tolerance (inf when the
    constrained subspace is trivial).
    """

    property_name: str
    holds: bool
    nullspace_dim: int
    smallest_structural_singular_value: float
    dual_span_dim: int
    ambient_dim: int
    dual_verdict: bool
    witness: np.ndarray | None = None
    witness_residual: float | None = None
    q_used: int | None = None
    q_alternatives: tuple[tuple[int, bool], ...] = field(default=())

    def as_dict(self) -> dict:
        return {
            "property": self.property_name,
            "holds": self.holds,
            "nullspace_dim": self.nullspace_dim,
            "smallest_structural_singular_value": (
                None
                if np.isinf(self.smallest_structural_singular_value)
                else self.smallest_structural_singular_value
            ),
            "dual_span_dim": self.dual_span_dim,
            "ambient_dim": self.ambient_dim,
            "dual_verdict": self.dual_verdict,
            "witness": None if self.witness is None else self.witness.tolist(),
            "witness_residual": self.witness_residual,
            "q_used": self.q_used,
            "q_alternatives": [list(alt) for alt in self.q_alternatives],
        }


def _stack_columns(matrices) -> np.ndarray:
    return np.column_stack([m.reshape(-1) for m in matrices])


def _primal_nullspace(images, extra_rows, tol):
    """Nullspace of the stacked constraint system; columns index the
    constrained-subspace basis."""
    cols = [m.reshape(-1) for m in images]
    system = np.column_stack(cols)
    if extra_rows:
        system = np.vstack([system, np.array(extra_rows)])
    dim, basis = nullspace(system, tol)
    svals = np.linalg.svd(system, compute_uv=False)
    sigma_min = float(svals[-1]) if len(svals) >= system.shape[1] else 0.0
    return dim, basis, sigma_min


def _witness_from(basis: PatternBasis, coeffs: np.ndarray) -> np.ndarray:
    w = basis.combine(coeffs)
    return w / fro(w)


def _smp_trace_rows(powers, x_basis):
    """Rows tr(A^k X_j) of the SMP primal system, one row per power."""
    return [[float(np.sum(p * x)) for x in x_basis.matrices] for p in powers]


def _check_and_build(
    name: str,
    a_original: np.ndarray,
    x_basis: PatternBasis,
    image_of,
    extra_rows,
    dual_mats,
    ambient: int,
    tol: Tolerances,
    residual_of=None,
    q_used: int | None = None,
    q_alternatives=(),
) -> StrongPropertyReport:
    if x_basis.dim == 0:
        # Constrained subspace is {O}: the property holds with no solve.
        holds, null_dim, sigma_min, witness = True, 0, float("inf"), None
    else:
        images = [image_of(x) for x in x_basis.matrices]
        null_dim, null_basis, sigma_min = _primal_nullspace(images, extra_rows, tol)
        holds = null_dim == 0
        witness = None if holds else _witness_from(x_basis, null_basis[:, 0])

    dual_dim = rank(_stack_columns(dual_mats), tol)
    dual_verdict = dual_dim == ambient
    if dual_verdict != holds:
        raise InternalCheckError(
            f"{name}: primal verdict {holds} disagrees with dual verdict "
            f"{dual_verdict} (nullspace {null_dim}, dual span {dual_dim}/{ambient})"
        )

    witness_residual = None
    if witness is not None and residual_of is not None:
        witness_residual = residual_of(witness)

    return StrongPropertyReport(
        property_name=name,
        holds=holds,
        nullspace_dim=null_dim,
        smallest_structural_singular_value=sigma_min,
        dual_span_dim=dual_dim,
        ambient_dim=ambient,
        dual_verdict=dual_verdict,
        witness=witness,
        witness_residual=witness_residual,
        q_used=q_used,
        q_alternatives=tuple(q_alternatives),
    )


def _prepare_symmetric(a, g: Graph, tol: Tolerances):
    a = symmetrize(a)
    if a.shape[0] != g.n:
        raise InputError(
            f"matrix size {a.shape[0]} does not match graph on {g.n} vertices"
        )
    if not matrix_in_graph_class(a, g, tol):
        raise InputError("matrix is not in the class of the given graph")
    scale = fro(a)
    work = a / scale if scale > 0 else a
    return a, work


def verify_ssp(a, g: Graph, tol: Tolerances = DEFAULT_TOL) -> StrongPropertyReport:
    """Strong spectral property of a symmetric matrix relative to its graph.

    Primal equations: A o X = O, I o X = O, [A, X] = O.
    Dual: closure(graph class) + {K^T A + A K : K skew} spans all
    symmetric matrices.
    """
    a, w = _prepare_symmetric(a, g, tol)
    n = g.n
    x_basis = edge_span_basis(g.complement())
    dual = list(graph_closure_basis(g).matrices)
    dual += [w @ k - k @ w for k in skew_basis(n).matrices]
    return _check_and_build(
        "ssp",
        a,
        x_basis,
        image_of=lambda x: w @ x - x @ w,
        extra_rows=None,
        dual_mats=dual,
        ambient=n * (n + 1) // 2,
        tol=tol,
        residual_of=lambda x: fro(a @ x - x @ a) / max(fro(a), 1e-300),
    )


def _smp_q_candidates(lam: np.ndarray, tol: Tolerances) -> tuple[int, list[int]]:
    """Number of distinct eigenvalues plus alternatives when the clustering
    decision sits within a factor 2 of the threshold."""
    clusters = cluster_eigenvalues(lam, tol)
    q = len(clusters)
    spread = float(lam[-1] - lam[0]) if len(lam) > 1 else 0.0
    thr = tol.cluster_tol * max(1.0, spread)
    alternatives = []
    centers = [c for c, _ in clusters]
    if q > 1 and any(
        thr < centers[i + 1] - centers[i] <= 2.0 * thr for i in range(q - 1)
    ):
        alternatives.append(q - 1)
    intra = [
        lam[i + 1] - lam[i]
        for i in range(len(lam) - 1)
        if lam[i + 1] - lam[i] <= thr
    ]
    if any(gap > thr / 2.0 for gap in intra):
        alternatives.append(q + 1)
    return q, alternatives


def verify_smp(a, g: Graph, tol: Tolerances = DEFAULT_TOL) -> StrongPropertyReport:
    """Strong multiplicity property: the SSP system plus the trace
    conditions tr(A^k X) = 0 for k = 0..q-1, with q the number of distinct
    eigenvalues under the clustering tolerance.

    The q actually used is recorded; when the clustering is ambiguous
    (some gap within 2x of the threshold) the verdicts for the alternative
    q values are reported as well.
    """
    a, w = _prepare_symmetric(a, g, tol)
    n = g.n
    lam = sym_eig(w, tol).eigenvalues
    q, alt_qs = _smp_q_candidates(lam, tol)

    x_basis = edge_span_basis(g.complement())
    dual_base = list(graph_closure_basis(g).matrices)
    dual_base += [w @ k - k @ w for k in skew_basis(n).matrices]

    def build(q_val):
        powers = [np.linalg.matrix_power(w, k) for k in range(q_val)]
        extra = _smp_trace_rows(powers, x_basis) if x_basis.dim else None
        return powers, extra

    def verdict_only(q_val) -> bool:
        if x_basis.dim == 0:
            return True
        powers, extra = build(q_val)
        images = [w @ x - x @ w for x in x_basis.matrices]
        dim, _, _ = _primal_nullspace(images, extra, tol)
        return dim == 0

    powers, extra = build(q)
    report = _check_and_build(
        "smp",
        a,
        x_basis,
        image_of=lambda x: w @ x - x @ w,
        extra_rows=extra,
        dual_mats=dual_base + powers,
        ambient=n * (n + 1) // 2,
        tol=tol,
        residual_of=lambda x: fro(a @ x - x @ a) / max(fro(a), 1e-300),
        q_used=q,
        q_alternatives=[(alt, verdict_only(alt)) for alt in alt_qs if 1 <= alt <= n],
    )
    return report


def verify_sap(a, g: Graph, tol: Tolerances = DEFAULT_TOL) -> StrongPropertyReport:
    """Strong Arnol'd property: A o X = O, I o X = O, A X = O; dual uses
    {L^T A + A L} with L ranging over all square matrices."""
    a, w = _prepare_symmetric(a, g, tol)
    n = g.n
    x_basis = edge_span_basis(g.complement())
    dual = list(graph_closure_basis(g).matrices)
    dual += [l.T @ w + w @ l for l in full_basis(n).matrices]
    return _check_and_build(
        "sap",
        a,
        x_basis,
        image_of=lambda x: w @ x,
        extra_rows=None,
        dual_mats=dual,
        ambient=n * (n + 1) // 2,
        tol=tol,
        residual_of=lambda x: fro(a @ x) / max(fro(a), 1e-300),
    )


def verify_nssp(
    a,
    tol: Tolerances = DEFAULT_TOL,
    pattern: SignPattern | None = None,
) -> StrongPropertyReport:
    """Non-symmetric strong spectral property of a square matrix.

    Primal: A o X = O and [A, X^T] = O force X = O, with X ranging over
    matrices supported on the zero cells of A (or of ``pattern`` when
    supplied, after checking A lies in its sign class).  Dual: the sign
    tangent space plus {-L A + A L} spans all of M_n.
    """
    a = as_matrix(a)
    n = require_square(a)
    if pattern is not None:
        if not matrix_in_sign_class(a, pattern, tol):
            raise InputError("matrix is not in the class of the given sign pattern")
    else:
        pattern = SignPattern.from_matrix(a)
    scale = fro(a)
    w = a / scale if scale > 0 else a
    x_basis = cell_basis(n, pattern.zero_cells())
    dual = list(sign_tangent_basis(pattern).matrices)
    dual += [w @ l - l @ w for l in full_basis(n).matrices]
    return _check_and_build(
        "nssp",
        a,
        x_basis,
        image_of=lambda x: w @ x.T - x.T @ w,
        extra_rows=None,
        dual_mats=dual,
        ambient=n * n,
        tol=tol,
        residual_of=lambda x: fro(a @ x.T - x.T @ a) / max(fro(a), 1e-300),
    )


_VERIFIERS = {
    "ssp": verify_ssp,
    "smp": verify_smp,
    "sap": verify_sap,
}


def verify_property(
    name: str,
    a,
    graph: Graph | None = None,
    pattern: SignPattern | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> StrongPropertyReport:
    """Dispatch by property name ('ssp', 'smp', 'sap', 'nssp')."""
    name = name.lower()
    if name == "nssp":
        return verify_nssp(a, tol, pattern=pattern)
    if name not in _VERIFIERS:
        raise InputError(f"unknown property {name!r}")
    if graph is None:
        raise InputError(f"property {name} needs a graph")
    return _VERIFIERS[name](a, graph, tol)
