"""Quick invariant checks run by ``gtsvd-bench selftest``."""

import numpy as np

from .factorizations import tpinv, tqr, tsvd
from .gsvd_matrix import gsvd
from .gtsvd import gtsvd, relative_error, rgtsvd_projection, rgtsvd_slicewise
from .sketch import SketchConfig
from .tensor_core import dft_mode3, frobenius_norm, idft_mode3, is_f_diagonal, tprod, tprod_circulant
from .bench import gen_low_tubal_rank


def _rel(a, b):
    return frobenius_norm(a - b) / max(frobenius_norm(b), 1e-300)


def _tprod_oracle(rng):
    worst = 0.0
    for _ in range(20):
        n1, n2, n4, n3 = rng.integers(1, 7, size=4)
        x = rng.standard_normal((n1, n2, n3))
        y = rng.standard_normal((n2, n4, n3))
        worst = max(worst, _rel(tprod(x, y), tprod_circulant(x, y)))
    return worst <= 1e-12, worst


def _dft_roundtrip(rng):
    x = rng.standard_normal((3, 4, 5))
    err = _rel(idft_mode3(dft_mode3(x)), x)
    return err <= 1e-12, err


def _penrose(rng):
    x = rng.standard_normal((5, 3, 4))
    p = tpinv(x)
    res = max(
        _rel(tprod(x, tprod(p, x)), x),
        _rel(tprod(p, tprod(x, p)), p),
    )
    return res <= 1e-8, res


def _factorizations(rng):
    x = rng.standard_normal((6, 3, 4))
    qr = tqr(x)
    sv = tsvd(x, 3)
    err = max(_rel(tprod(qr.Q, qr.R), x), _rel(sv.reconstruct(), x))
    return err <= 1e-10 and is_f_diagonal(sv.S), err


def _gsvd_pencil(rng):
    x = rng.standard_normal((4, 3))
    y = rng.standard_normal((5, 3))
    f = gsvd(x, y)
    got = np.sort((f.alphas / f.betas) ** 2)
    want = np.sort(np.linalg.eigvals(np.linalg.solve(y.T @ y, x.T @ x)).real)
    err = float(np.max(np.abs(got - want) / want))
    return err <= 1e-6, err


def _gtsvd_algorithms(rng):
    x = gen_low_tubal_rank(12, 3, rng)
    y = gen_low_tubal_rank(12, 3, rng)
    cfg = SketchConfig(3, 3, 4, 4, seed=7)
    err = max(
        relative_error(x, y, gtsvd(x, y)),
        relative_error(x, y, rgtsvd_slicewise(x, y, cfg)),
        relative_error(x, y, rgtsvd_projection(x, y, cfg)),
    )
    return err <= 1e-8, err


def _determinism(rng):
    x = rng.standard_normal((8, 6, 3))
    y = rng.standard_normal((7, 6, 3))
    cfg = SketchConfig(2, 2, 2, 2, q=1, seed=11)
    a, b = rgtsvd_projection(x, y, cfg), rgtsvd_projection(x, y, cfg)
    same = all(np.array_equal(getattr(a, k), getattr(b, k)) for k in "UCZVS")
    return same, 0.0


CHECKS = {
    "tprod_matches_circulant_oracle": _tprod_oracle,
    "dft_roundtrip": _dft_roundtrip,
    "penrose_identities": _penrose,
    "tqr_tsvd_reconstruct": _factorizations,
    "gsvd_pencil": _gsvd_pencil,
    "gtsvd_low_rank_exact": _gtsvd_algorithms,
    "seeded_determinism": _determinism,
}


def run_selftest(seed=0, out=print):
    """Run every check, print one line each and return True when all pass."""
    rng = np.random.default_rng(seed)
    ok = True
    for name, check in CHECKS.items():
        passed, value = check(rng)
        ok &= bool(passed)
        out(f"{'PASS' if passed else 'FAIL'} {name} ({value:.3e})")
    return ok
