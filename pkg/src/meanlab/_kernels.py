"""Picard iteration kernels for the power-mean fixed point.

Two implementations of the same loop:

* ``picard_numba``  -- scalar loops compiled with ``numba.njit``;
* ``picard_numpy``  -- batched ``numpy.linalg.eigh`` over the atom stack.

``picard`` is bound to the numba version unless numba is missing or the
environment variable ``MEANLAB_NUMBA`` is set to ``0``/``false``/``off``.

One step maps ``X`` to ``X^{1/2} S X^{1/2}`` with
``S = sum_i w_i (X^{-1/2} A_i X^{-1/2})^t``.  Since ``X^{-1/2} f(X) X^{-1/2} = S``,
the Thompson length of the step is ``max |log eig(S)|`` and costs one extra
eigenvalue solve.
"""
from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("MEANLAB_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("0", "false", "no", "off")


def _picard_loop(atoms, weights, X, t, tol, max_iter):
    k = atoms.shape[0]
    n = atoms.shape[1]
    first = -1.0
    step = np.inf
    it = 0
    while it < max_iter:
        w, U = np.linalg.eigh(X)
        sw = np.sqrt(w)
        Uh = np.ascontiguousarray(U.conj().T)
        sq = np.ascontiguousarray(U * sw) @ Uh
        isq = np.ascontiguousarray(U / sw) @ Uh
        S = np.zeros((n, n), dtype=np.complex128)
        for i in range(k):
            M = isq @ atoms[i] @ isq
            M = 0.5 * (M + np.ascontiguousarray(M.conj().T))
            mw, MU = np.linalg.eigh(M)
            S += weights[i] * (np.ascontiguousarray(MU * mw**t) @ np.ascontiguousarray(MU.conj().T))
        S = 0.5 * (S + np.ascontiguousarray(S.conj().T))
        sv = np.linalg.eigvalsh(S)
        step = max(abs(np.log(sv[0])), abs(np.log(sv[n - 1])))
        Y = sq @ S @ sq
        X = 0.5 * (Y + np.ascontiguousarray(Y.conj().T))
        it += 1
        if first < 0.0:
            first = step
        if step <= tol:
            break
    return X, it, first, step


def picard_numpy(atoms, weights, X, t, tol, max_iter):
    """Vectorized reference path; same contract as :func:`picard_numba`."""
    atoms = np.asarray(atoms, dtype=np.complex128)
    weights = np.asarray(weights, dtype=np.float64)
    X = np.array(X, dtype=np.complex128)
    first = -1.0
    step = np.inf
    it = 0
    while it < max_iter:
        w, U = np.linalg.eigh(X)
        sw = np.sqrt(w)
        Uh = U.conj().T
        sq = (U * sw) @ Uh
        isq = (U / sw) @ Uh
        M = isq @ atoms @ isq
        M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
        mw, MU = np.linalg.eigh(M)
        P = (MU * mw[:, None, :] ** t) @ np.conj(np.swapaxes(MU, -1, -2))
        S = np.tensordot(weights, P, axes=1)
        S = 0.5 * (S + S.conj().T)
        sv = np.linalg.eigvalsh(S)
        step = float(max(abs(np.log(sv[0])), abs(np.log(sv[-1]))))
        Y = sq @ S @ sq
        X = 0.5 * (Y + Y.conj().T)
        it += 1
        if first < 0.0:
            first = step
        if step <= tol:
            break
    return X, it, first, step


if numba is not None:
    _picard_jit = numba.njit(cache=True)(_picard_loop)

    def picard_numba(atoms, weights, X, t, tol, max_iter):
        """Run at most ``max_iter`` Picard steps from ``X``.

        Returns ``(X_final, iterations, first_step, last_step)``; step lengths
        are Thompson distances between consecutive iterates and the loop stops
        once one is ``<= tol``.
        """
        return _picard_jit(
            np.ascontiguousarray(atoms, dtype=np.complex128),
            np.ascontiguousarray(weights, dtype=np.float64),
            np.array(X, dtype=np.complex128, order="C"),
            float(t),
            float(tol),
            int(max_iter),
        )
else:  # pragma: no cover
    picard_numba = None

picard = picard_numba if USE_NUMBA else picard_numpy
BACKEND = "numba" if USE_NUMBA else "numpy"
