"""Joint decompositions of ``(D, A)`` pairs and separable certificates.

A pair ``(D, A)`` with ``D`` diagonal and ``diag(D) - A`` row diagonally
dominant can be written as ``D = sum mu_i v_i v_i^T`` and
``A = sum lambda_i v_i v_i^T`` over a common family of vectors with
``mu_i >= lambda_i``. Given such decompositions for every factor of
``D_1 (x) ... (x) D_m - P_1 (x) ... (x) P_m`` the difference expands into
rank-one product terms with weights ``prod mu - prod lambda``. Those weights
are only guaranteed nonnegative when ``mu_i >= |lambda_i|`` on every factor,
so two decompositions are provided:

``eigen``
    eigendecomposition of a row-sum-balanced part of ``A`` plus a diagonal
    remainder. Satisfies ``mu >= lambda`` but the diagonal remainder can
    have ``mu < |lambda|`` on irregular graphs.
``edge``
    one pair of vectors ``(e_a +- e_b)/sqrt(2)`` per off-diagonal entry,
    plus coordinate vectors for the diagonal and the slack. Satisfies
    ``mu >= |lambda|`` whenever ``D_ii >= sum_j |A_ij|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import DimensionMismatch, NegativeWeight, NotDiagonallyDominant, ZeroTrace
from .graph_core import DensityMatrix, RDD_TOL, is_row_diagonally_dominant

RECON_TOL = 1e-10
WEIGHT_TOL = 1e-12
DROP_TOL = 1e-14
NEG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class JointDecomposition:
    vectors: np.ndarray  # (k, n), one vector per row
    mu: np.ndarray
    lam: np.ndarray
    method: str = "eigen"
    pivot: float | None = None

    def rebuild(self, coeffs: np.ndarray) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", coeffs, self.vectors, self.vectors)

    def rebuild_D(self) -> np.ndarray:
        return self.rebuild(self.mu)

    def rebuild_A(self) -> np.ndarray:
        return self.rebuild(self.lam)

    def __len__(self) -> int:
        return len(self.mu)


def _as_diag(D: np.ndarray) -> np.ndarray:
    D = np.asarray(D, dtype=float)
    if D.ndim == 2:
        if np.any(D - np.diag(np.diag(D))):
            raise ValueError("D must be diagonal")
        return np.diag(D).copy()
    return D.reshape(-1)


def _check(dec: JointDecomposition, d: np.ndarray, A: np.ndarray) -> JointDecomposition:
    if np.max(np.abs(dec.rebuild_D() - np.diag(d)), initial=0) > RECON_TOL:
        raise ArithmeticError("joint decomposition does not reconstruct D")
    if np.max(np.abs(dec.rebuild_A() - A), initial=0) > RECON_TOL:
        raise ArithmeticError("joint decomposition does not reconstruct A")
    if np.any(dec.mu < dec.lam - WEIGHT_TOL):
        raise ArithmeticError("joint decomposition violates mu >= lambda")
    return dec


def joint_decompose(D: np.ndarray, A: np.ndarray, method: str = "eigen", pivot: str = "max") -> JointDecomposition:
    """Decompose ``(D, A)`` into ``(mu_i, lambda_i, v_i)`` triples with ``mu_i >= lambda_i``.

    ``method="eigen"`` balances the row sums ``r_i`` of ``|A|_*`` (``A``'s own
    diagonal kept signed) against a pivot ``r`` by moving ``diag(r_i - r)``
    into a diagonal remainder, eigendecomposes the balanced part (each
    eigenvector gets ``mu = r``; Gershgorin gives ``lambda <= r``) and emits
    the remainder on coordinate vectors. ``pivot`` is ``"max"`` (largest row
    sum) or ``"first"`` (row 0). ``method="edge"`` is described in the module
    docstring and additionally needs ``D_ii >= sum_j |A_ij|``.
    """
    d = _as_diag(D)
    A = np.asarray(A, dtype=float)
    n = d.size
    if A.shape != (n, n):
        raise DimensionMismatch(f"D has {n} entries but A has shape {A.shape}")
    if not np.allclose(A, A.T, rtol=0, atol=1e-14):
        raise ValueError("A must be symmetric")
    A = (A + A.T) / 2
    if not is_row_diagonally_dominant(np.diag(d) - A):
        raise NotDiagonallyDominant("diag(D) - A is not row diagonally dominant")
    if method == "eigen":
        return _check(_eigen_decompose(d, A, pivot), d, A)
    if method == "edge":
        return _check(_edge_decompose(d, A), d, A)
    raise ValueError(f"unknown method {method!r}")


def _eigen_decompose(d: np.ndarray, A: np.ndarray, pivot: str) -> JointDecomposition:
    n = d.size
    r = np.abs(A).sum(axis=1) - np.abs(np.diag(A)) + np.diag(A)
    if pivot == "max":
        r0 = r.max()
    elif pivot == "first":
        r0 = r[0]
    else:
        raise ValueError(f"unknown pivot {pivot!r}")
    shift = r - r0
    balanced = A - np.diag(shift)
    lam_eig, vecs = np.linalg.eigh(balanced)
    if np.any(lam_eig > r0 + 1e-9 * max(1.0, abs(r0))):
        raise ArithmeticError("eigenvalue above the Gershgorin bound")
    vectors = np.vstack([vecs.T, np.eye(n)])
    mu = np.concatenate([np.full(n, r0), d - r0])
    lam = np.concatenate([lam_eig, shift])
    return JointDecomposition(vectors, mu, lam, method="eigen", pivot=float(r0))


def _edge_decompose(d: np.ndarray, A: np.ndarray) -> JointDecomposition:
    n = d.size
    slack = d - np.abs(A).sum(axis=1)
    if np.any(slack < -RDD_TOL):
        raise NotDiagonallyDominant("edge decomposition needs D_ii >= sum_j |A_ij|")
    vectors, mu, lam = [], [], []
    s = 1 / math.sqrt(2)
    iu, ju = np.nonzero(np.triu(A, 1))
    for a, b in zip(iu, ju):
        w = A[a, b]
        for sign in (1.0, -1.0):
            v = np.zeros(n)
            v[a], v[b] = s, sign * s
            vectors.append(v)
            mu.append(abs(w))
            lam.append(sign * w)
    eye = np.eye(n)
    for a in range(n):
        if A[a, a] != 0:
            vectors.append(eye[a])
            mu.append(abs(A[a, a]))
            lam.append(A[a, a])
    for a in range(n):
        if slack[a] > 0:
            vectors.append(eye[a])
            mu.append(slack[a])
            lam.append(0.0)
    if not vectors:
        return JointDecomposition(np.zeros((0, n)), np.zeros(0), np.zeros(0), method="edge")
    return JointDecomposition(np.array(vectors), np.array(mu), np.array(lam), method="edge")


@dataclass(eq=False)
class SeparableCertificate:
    """Convex combination of rank-one product states.

    Term ``t`` is ``weights[t] * (x)_k f_k f_k^T`` with ``f_k = factors[k][t]``.
    """

    dims: tuple[int, ...]
    weights: np.ndarray
    factors: list[np.ndarray]
    meta: dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.weights)

    def product_vectors(self) -> np.ndarray:
        psi = self.factors[0]
        for f in self.factors[1:]:
            psi = (psi[:, :, None] * f[:, None, :]).reshape(len(self.weights), -1)
        return psi

    def matrix(self) -> np.ndarray:
        psi = self.product_vectors()
        return (psi.T * self.weights) @ psi

    def to_json(self, target: DensityMatrix | np.ndarray | None = None) -> dict:
        out: dict[str, Any] = {
            "dims": list(self.dims),
            "terms": [
                {"weight": float(w), "factors": [f[t].tolist() for f in self.factors]}
                for t, w in enumerate(self.weights)
            ],
        }
        if target is not None:
            out["residual"] = verify_certificate(self, target)
        out.update({k: v for k, v in self.meta.items() if k not in out})
        return out

    @classmethod
    def from_json(cls, data: dict) -> "SeparableCertificate":
        dims = tuple(data["dims"])
        terms = data["terms"]
        weights = np.array([t["weight"] for t in terms], dtype=float)
        factors = [np.array([t["factors"][k] for t in terms], dtype=float).reshape(len(terms), p)
                   for k, p in enumerate(dims)]
        return cls(dims, weights, factors)


def verify_certificate(cert: SeparableCertificate, target: DensityMatrix | np.ndarray) -> float:
    """Largest entrywise difference between the certificate and ``target``."""
    mat = target.mat if isinstance(target, DensityMatrix) else np.asarray(target)
    if mat.shape[0] != math.prod(cert.dims):
        raise DimensionMismatch(f"target of size {mat.shape[0]} does not match dims {cert.dims}")
    return float(np.max(np.abs(cert.matrix() - mat)))


def certificate_checks(cert: SeparableCertificate, target: DensityMatrix | np.ndarray) -> dict[str, Any]:
    """Residual, weight positivity, weight sum and factor norms in one report."""
    residual = verify_certificate(cert, target)
    min_weight = float(cert.weights.min()) if len(cert) else 0.0
    weight_sum = float(cert.weights.sum())
    norm_err = max((float(np.max(np.abs(np.linalg.norm(f, axis=1) - 1))) for f in cert.factors if len(f)),
                   default=0.0)
    ok = (residual < RECON_TOL and min_weight >= -WEIGHT_TOL
          and abs(weight_sum - 1) < RECON_TOL and norm_err < 1e-10)
    return {"residual": residual, "min_weight": min_weight, "weight_sum": weight_sum,
            "unit_norm_error": norm_err, "ok": ok}


def _expand(decs: Sequence[JointDecomposition]) -> tuple[np.ndarray, list[np.ndarray]]:
    mu = np.ones(1)
    lam = np.ones(1)
    for dec in decs:
        mu = np.outer(mu, dec.mu).reshape(-1)
        lam = np.outer(lam, dec.lam).reshape(-1)
    weights = mu - lam
    grids = np.meshgrid(*[np.arange(len(dec)) for dec in decs], indexing="ij")
    factors = [dec.vectors[g.reshape(-1)] for dec, g in zip(decs, grids)]
    return weights, factors


def kron_separable_certificate(terms: Sequence[Sequence[tuple[np.ndarray, np.ndarray]]],
                               method: str = "auto", pivot: str = "max") -> SeparableCertificate:
    """Certificate for ``sum_j (D_1^j (x) ... (x) D_m^j - P_1^j (x) ... (x) P_m^j)``, normalized.

    ``terms[j][k]`` is the pair ``(D_k^j, P_k^j)``. With ``method="auto"``
    each term is expanded through the eigen decomposition first and, if a
    weight comes out negative, through the edge decomposition. A negative
    weight that survives both raises :class:`NegativeWeight`.
    """
    if not terms:
        raise ZeroTrace("no terms")
    m = len(terms[0])
    dims = tuple(np.asarray(P).shape[0] for _, P in terms[0])
    for term in terms:
        if tuple(np.asarray(P).shape[0] for _, P in term) != dims:
            raise DimensionMismatch("all terms must share the same factor dimensions")

    trace = sum(math.prod(float(_as_diag(D).sum()) for D, _ in term)
                - math.prod(float(np.trace(P)) for _, P in term) for term in terms)
    if abs(trace) < 1e-14:
        raise ZeroTrace("assembled matrix has zero trace")

    methods = {"auto": ("eigen", "edge"), "eigen": ("eigen",), "edge": ("edge",)}[method]
    all_w, all_f = [], [[] for _ in range(m)]
    used = []
    for j, term in enumerate(terms):
        last_error: Exception | None = None
        for meth in methods:
            try:
                decs = [joint_decompose(D, P, method=meth, pivot=pivot) for D, P in term]
            except NotDiagonallyDominant as exc:
                last_error = exc
                continue
            w, fs = _expand(decs)
            keep = np.abs(w) >= DROP_TOL
            w = w[keep]
            if np.any(w < -NEG_TOL * max(1.0, abs(trace))):
                last_error = NegativeWeight(f"term {j}: weight {w.min():.3e} with the {meth} decomposition")
                continue
            all_w.append(w)
            for k in range(m):
                all_f[k].append(fs[k][keep])
            used.append(meth)
            break
        else:
            if isinstance(last_error, NegativeWeight):
                raise last_error
            raise NegativeWeight(f"term {j}: no decomposition yields nonnegative weights ({last_error})")

    weights = np.concatenate(all_w) / trace
    factors = [np.concatenate(f) for f in all_f]
    cert = SeparableCertificate(dims, weights, factors,
                                meta={"decomposition": used, "pivot": pivot})
    target = sum(_kron_all([np.diag(_as_diag(D)) for D, _ in term]) - _kron_all([np.asarray(P) for _, P in term])
                 for term in terms) / trace
    checks = certificate_checks(cert, target)
    if checks["min_weight"] < -WEIGHT_TOL:
        raise NegativeWeight(f"normalized weight {checks['min_weight']:.3e} is negative")
    if not checks["ok"]:
        raise ArithmeticError(f"certificate failed validation: {checks}")
    cert.meta["residual"] = checks["residual"]
    return cert


def _kron_all(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1))
    for M in mats:
        out = np.kron(out, M)
    return out
