"""Expected-error bounds for the sketched GSVD and the randomized GTSVD.

For a matrix pair with GSVD ``X = U C Z``, ``Y = V S Z`` and Gaussian
sketches ``M = X Phi`` (width ``r1 + p1``), ``N = Y Psi`` (width ``r2 + p2``)::

    E ||X - M M^+ X|| <= eta1_X * alpha_{r1+1}  + eta2_X * sqrt(sum_{j > r1} alpha_j^2)
    E ||Y - N N^+ Y|| <= eta1_Y * beta_{k-r2}   + eta2_Y * sqrt(sum_{j <= k-r2} beta_j^2)

The ``eta`` factors depend only on the row blocks of ``Z`` (see
:func:`tgsvd.gsvd_matrix.partition_factors`) and the oversampling.  The
tensor bound applies the matrix bound to every Fourier slice pair and
aggregates through Parseval, ``||T||^2 = (1/I3) sum_i ||T_hat_i||^2``.
"""

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DimensionMismatchError, OversamplingTooSmallError, SingularPartitionError
from .factorizations import tpinv
from .gsvd_matrix import _as_matrix, gsvd, partition_factors
from .sketch import SketchConfig
from .tensor_core import as_tensor3, frobenius_norm, half_count, half_spectrum, is_self_conjugate, tprod


@dataclass(frozen=True)
class EtaFactors:
    eta1_X: float
    eta2_X: float
    eta1_Y: float
    eta2_Y: float


def _eta_pair(lead, tail, r, p, norm_z, side):
    """``eta1, eta2`` for one side: ``lead`` holds the ``r`` kept rows, ``tail`` the discarded ones."""
    s_lead = np.linalg.svd(lead, compute_uv=False) if lead.size else np.zeros(0)
    if len(s_lead) < r or not s_lead[r - 1] > 0:
        raise SingularPartitionError(f"sigma_{r} of the leading {side} block of Z is zero")
    s_lead = s_lead[:r]
    tail_top = np.linalg.norm(tail, 2) if tail.size else 0.0
    tail_fro = np.linalg.norm(tail) if tail.size else 0.0
    s_min = s_lead[-1]
    eta1 = norm_z * (1.0 + tail_top / s_min) + np.sqrt(r / (p - 1) * np.sum(tail_top**2 / s_lead**2))
    eta2 = norm_z * (tail_fro / s_min) * np.e * np.sqrt(r + p) / p
    return float(eta1), float(eta2)


def eta_factors(part, norm_z, cfg: SketchConfig):
    """The four ``eta`` factors for a partitioned GSVD.

    ``norm_z`` is the Frobenius norm of the whole ``Z``.

    >>> part = partition_factors(gsvd(np.eye(3), np.eye(3)), 1, 1)
    >>> eta = eta_factors(part, np.sqrt(6), SketchConfig(1, 1, 2, 2))
    >>> round(eta.eta2_X, 6) == round(3 * np.e, 6)
    True
    """
    if cfg.p1 < 2 or cfg.p2 < 2:
        raise OversamplingTooSmallError(f"eta factors need p1, p2 >= 2, got {cfg.p1}, {cfg.p2}")
    if part.r1 != cfg.r1 or part.r2 != cfg.r2:
        raise DimensionMismatchError(
            f"partition ranks ({part.r1}, {part.r2}) differ from the sketch ranks ({cfg.r1}, {cfg.r2})"
        )
    e1x, e2x = _eta_pair(part.Z1, part.Z2, cfg.r1, cfg.p1, norm_z, "X")
    e1y, e2y = _eta_pair(part.Zhat2, part.Zhat1, cfg.r2, cfg.p2, norm_z, "Y")
    return EtaFactors(e1x, e2x, e1y, e2y)


@dataclass(frozen=True)
class SliceBound:
    """Bound ingredients for one matrix pair (or one Fourier slice pair)."""

    eta1_X: float
    eta2_X: float
    eta1_Y: float
    eta2_Y: float
    alpha_next: float
    alpha_tail: float
    beta_edge: float
    beta_tail: float

    @property
    def bound_X(self):
        return self.eta1_X * self.alpha_next + self.eta2_X * self.alpha_tail

    @property
    def bound_Y(self):
        return self.eta1_Y * self.beta_edge + self.eta2_Y * self.beta_tail


def _slice_bound(x, y, cfg):
    f = gsvd(x, y)
    eta = eta_factors(partition_factors(f, cfg.r1, cfg.r2), float(np.linalg.norm(f.Z)), cfg)
    a, b, k = f.alphas, f.betas, f.k
    edge = k - cfg.r2
    return SliceBound(
        eta.eta1_X,
        eta.eta2_X,
        eta.eta1_Y,
        eta.eta2_Y,
        alpha_next=float(a[cfg.r1]) if cfg.r1 < k else 0.0,
        alpha_tail=float(np.sqrt(np.sum(a[cfg.r1:] ** 2))),
        beta_edge=float(b[edge - 1]) if edge > 0 else 0.0,
        beta_tail=float(np.sqrt(np.sum(b[:edge] ** 2))) if edge > 0 else 0.0,
    ), f


def theorem1_bound(x, y, cfg: SketchConfig):
    """Expected-residual bounds ``(bound_X, bound_Y)`` for the Gaussian sketches of a matrix pair."""
    x = _as_matrix(x, "X")
    y = _as_matrix(y, "Y")
    if x.shape[1] != y.shape[1]:
        raise DimensionMismatchError(f"X has {x.shape[1]} columns but Y has {y.shape[1]}")
    cfg.check(x.shape[0], x.shape[1], y.shape[0])
    sb, _ = _slice_bound(x, y, cfg)
    return sb.bound_X, sb.bound_Y


@dataclass(frozen=True)
class ErrorBoundReport:
    """Tensor bounds with their per-slice ingredients.

    ``bound_X`` and ``bound_Y`` aggregate the squared slice bounds,
    ``sqrt(mean(b_i**2))``, which reduces to the matrix bound for ``I3 = 1``.
    ``bound_X_linear`` and ``bound_Y_linear`` aggregate the unsquared slice
    bounds, ``sqrt(mean(b_i))``.  The Y slice bounds carry the
    ``beta_{k-r2}`` factor on ``eta1_Y``.
    """

    bound_X: float
    bound_Y: float
    bound_X_linear: float
    bound_Y_linear: float
    per_slice: tuple
    alphas: tuple = field(default=(), repr=False)
    betas: tuple = field(default=(), repr=False)

    def to_dict(self):
        rows = []
        for s in self.per_slice:
            d = asdict(s)
            rows.append({key: d[key] for key in ("eta1_X", "eta2_X", "eta1_Y", "eta2_Y", "alpha_tail", "beta_tail")})
        return {
            "bound_X": self.bound_X,
            "bound_Y": self.bound_Y,
            "bound_X_linear": self.bound_X_linear,
            "bound_Y_linear": self.bound_Y_linear,
            "per_slice": rows,
            "alphas": [list(map(float, a)) for a in self.alphas],
            "betas": [list(map(float, b)) for b in self.betas],
        }

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)


def theorem2_bound(x, y, cfg: SketchConfig):
    """Expected-residual bounds for ``X * Omega1`` and ``Y * Omega2`` on a tensor pair.

    Every Fourier slice pair ``(X_hat_i, Y_hat_i)`` gets its own GSVD and
    matrix bound; slices past ``half_count(I3)`` repeat their conjugate
    partner, whose spectrum and ``Z`` norms are identical.
    """
    x = as_tensor3(x, "X")
    y = as_tensor3(y, "Y")
    if x.shape[1] != y.shape[1] or x.shape[2] != y.shape[2]:
        raise DimensionMismatchError(f"X {x.shape} and Y {y.shape} must share modes 2 and 3")
    n1, n2, n3 = x.shape
    cfg.check(n1, n2, y.shape[0])
    xh, yh = half_spectrum(x), half_spectrum(y)
    half = []
    for k in range(half_count(n3)):
        a, b = (xh[k].real, yh[k].real) if is_self_conjugate(k, n3) else (xh[k], yh[k])
        half.append(_slice_bound(a, b, cfg))
    full = [half[k] if k < len(half) else half[n3 - k] for k in range(n3)]
    bx = np.array([s.bound_X for s, _ in full])
    by = np.array([s.bound_Y for s, _ in full])
    return ErrorBoundReport(
        bound_X=float(np.sqrt(np.mean(bx**2))),
        bound_Y=float(np.sqrt(np.mean(by**2))),
        bound_X_linear=float(np.sqrt(np.mean(bx))),
        bound_Y_linear=float(np.sqrt(np.mean(by))),
        per_slice=tuple(s for s, _ in full),
        alphas=tuple(f.alphas for _, f in full),
        betas=tuple(f.betas for _, f in full),
    )


def projection_error(a, w):
    """``||A - W * W^+ * A||``, the residual of projecting ``A`` onto the t-range of ``W``."""
    a = as_tensor3(a, "A")
    w = as_tensor3(w, "W")
    if w.shape[0] != a.shape[0] or w.shape[2] != a.shape[2]:
        raise DimensionMismatchError(f"cannot project {a.shape} onto the range of {w.shape}")
    return frobenius_norm(a - tprod(w, tprod(tpinv(w), a)))


def matrix_projection_error(a, m):
    """``||A - M M^+ A||`` for matrices."""
    a = _as_matrix(a, "A")
    m = _as_matrix(m, "M")
    return float(np.linalg.norm(a - m @ (np.linalg.pinv(m) @ a)))
