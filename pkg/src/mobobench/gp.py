"""Exact Gaussian process regression over fingerprint kernels.

One zero-mean GP per objective with fixed hyperparameters: an amplitude that
scales the unit-diagonal similarity kernel and an observation noise variance
added to the diagonal. Everything is float64; fitting is a dense Cholesky
factorization of K + noise*I, prediction is the usual

    mean(x)     = k(x)' (K + noise I)^{-1} y
    variance(x) = amplitude * k(x, x) - k(x)' (K + noise I)^{-1} k(x)

with the variance clamped to [0, amplitude]. If the factorization fails the
diagonal jitter escalates 1e-10 -> 1e-8 -> 1e-6 before a hard error naming
the objective that could not be fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .fingerprints import (
    KERNELS,
    CountFingerprint,
    cross_kernel_matrix,
    get_kernel,
    kernel_matrix,
)

__all__ = ["GPHyperparams", "GPModel", "MultiObjectiveSurrogate", "append_observation"]

_JITTERS = (0.0, 1e-10, 1e-8, 1e-6)


@dataclass(frozen=True)
class GPHyperparams:
    """Fixed kernel hyperparameters: no marginal-likelihood optimization happens anywhere."""

    amplitude: float = 1.0
    noise_variance: float = 1e-4
    mean: float = 0.0

    def __post_init__(self) -> None:
        if not self.amplitude > 0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if not self.noise_variance > 0:
            raise ValueError(f"noise_variance must be positive, got {self.noise_variance}")
        if not np.isfinite(self.mean):
            raise ValueError("mean must be finite")


def _factor(gram: np.ndarray, noise: float, objective_index: int) -> np.ndarray:
    n = gram.shape[0]
    eye = np.eye(n)
    for jitter in _JITTERS:
        try:
            return np.linalg.cholesky(gram + (noise + jitter) * eye)
        except np.linalg.LinAlgError:
            continue
    raise np.linalg.LinAlgError(
        f"kernel matrix for objective {objective_index} is not positive definite "
        f"after jitter escalation up to {_JITTERS[-1]:g}"
    )


@dataclass(frozen=True)
class GPModel:
    """Exact GP for one objective.

    chol is the lower Cholesky factor of gram + noise*I (jitter included);
    solve_vector is (K + noise I)^{-1} (y - mean). gram caches the noise-free
    amplitude-scaled kernel matrix so appending an observation only costs the
    new row plus a refactorization.
    """

    train_inputs: tuple[CountFingerprint, ...]
    train_targets: np.ndarray
    chol: np.ndarray
    solve_vector: np.ndarray
    hyperparams: GPHyperparams
    kernel: str
    gram: np.ndarray

    @property
    def n_train(self) -> int:
        return len(self.train_inputs)

    def predict(self, query: CountFingerprint) -> tuple[float, float]:
        """Posterior (mean, variance) at one fingerprint."""
        hp = self.hyperparams
        fn = get_kernel(self.kernel)
        k_vec = hp.amplitude * np.array([fn(query, x) for x in self.train_inputs])
        mean = hp.mean + float(k_vec @ self.solve_vector)
        v = solve_triangular(self.chol, k_vec, lower=True)
        var = hp.amplitude * fn(query, query) - float(v @ v)
        return mean, float(min(max(var, 0.0), hp.amplitude))


def _fit_objective(
    inputs: tuple[CountFingerprint, ...],
    targets: np.ndarray,
    gram: np.ndarray,
    hyperparams: GPHyperparams,
    kernel: str,
    objective_index: int,
) -> GPModel:
    chol = _factor(gram, hyperparams.noise_variance, objective_index)
    alpha = cho_solve((chol, True), targets - hyperparams.mean)
    return GPModel(inputs, targets, chol, alpha, hyperparams, kernel, gram)


@dataclass(frozen=True)
class MultiObjectiveSurrogate:
    """Independent per-objective GPs sharing inputs, kernel, and hyperparameters.

    Cross-covariances between objectives are deliberately ignored; the models
    differ only in their targets, so the predictive variance (a function of
    the inputs alone) is shared across objectives.
    """

    models: tuple[GPModel, ...]

    def __post_init__(self) -> None:
        if not self.models:
            raise ValueError("surrogate needs at least one objective model")
        first = self.models[0]
        for m in self.models[1:]:
            if m.hyperparams != first.hyperparams or m.kernel != first.kernel:
                raise ValueError("all objective models must share hyperparams and kernel")
            if m.train_inputs != first.train_inputs:
                raise ValueError("all objective models must share training inputs")

    @property
    def n_objectives(self) -> int:
        return len(self.models)

    @property
    def n_train(self) -> int:
        return self.models[0].n_train

    @property
    def hyperparams(self) -> GPHyperparams:
        return self.models[0].hyperparams

    @property
    def kernel(self) -> str:
        return self.models[0].kernel

    @property
    def train_inputs(self) -> tuple[CountFingerprint, ...]:
        return self.models[0].train_inputs

    @classmethod
    def fit(
        cls,
        inputs: Sequence[CountFingerprint],
        targets,
        hyperparams: GPHyperparams = GPHyperparams(),
        kernel: str = "minmax",
    ) -> "MultiObjectiveSurrogate":
        """Fit one GP per target column. targets has shape (n, d)."""
        if kernel not in KERNELS:
            raise ValueError(f"unknown kernel {kernel!r}; expected one of {KERNELS}")
        inp = tuple(inputs)
        y = np.array(targets, dtype=np.float64)
        if y.ndim == 1:
            y = y[:, None]
        if y.ndim != 2:
            raise ValueError(f"targets must be (n, d), got shape {y.shape}")
        if len(inp) == 0:
            raise ValueError("cannot fit a GP on zero observations")
        if len(inp) != y.shape[0]:
            raise ValueError(f"{len(inp)} inputs for {y.shape[0]} target rows")
        if not np.all(np.isfinite(y)):
            raise ValueError("targets contain non-finite values")
        gram = kernel_matrix(inp, kernel, hyperparams.amplitude)
        models = tuple(
            _fit_objective(inp, y[:, j].copy(), gram, hyperparams, kernel, j)
            for j in range(y.shape[1])
        )
        return cls(models)

    def append(self, fingerprint: CountFingerprint, values) -> "MultiObjectiveSurrogate":
        """New surrogate with one more observation; the old one is untouched.

        The cached gram matrix is extended by one row/column of kernel values
        and every objective is refactorized in full (no low-rank updates).
        """
        vals = np.asarray(values, dtype=np.float64).reshape(-1)
        if vals.shape[0] != self.n_objectives:
            raise ValueError(f"expected {self.n_objectives} target values, got {vals.shape[0]}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("target values contain non-finite entries")
        old = self.models[0]
        hp = old.hyperparams
        inputs = old.train_inputs + (fingerprint,)
        n = len(inputs)
        col = cross_kernel_matrix([fingerprint], old.train_inputs, old.kernel, hp.amplitude)[0]
        gram = np.empty((n, n), dtype=np.float64)
        gram[: n - 1, : n - 1] = old.gram
        gram[n - 1, : n - 1] = col
        gram[: n - 1, n - 1] = col
        gram[n - 1, n - 1] = hp.amplitude
        models = tuple(
            _fit_objective(
                inputs,
                np.append(m.train_targets, vals[j]),
                gram,
                hp,
                old.kernel,
                j,
            )
            for j, m in enumerate(self.models)
        )
        return MultiObjectiveSurrogate(models)

    def predict(self, query: CountFingerprint) -> tuple[np.ndarray, np.ndarray]:
        """Posterior (means, variances) at one fingerprint, each shape (d,)."""
        pairs = [m.predict(query) for m in self.models]
        return np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])

    def predict_batch(
        self,
        queries: Sequence[CountFingerprint] | None = None,
        *,
        cross: np.ndarray | None = None,
    ) -> tuple[np.ndarray, np.ndarray]:
        """Posterior (means, variances), each shape (m, d), for many queries.

        The cross-kernel matrix against the training inputs is computed once
        and shared across objectives; callers that maintain their own cache
        (the BO engine extends one column per round) pass it via `cross`
        instead, shape (m, n_train), amplitude already applied.

        The variance column is identical for every objective because the
        models share inputs and hyperparameters; it is computed once from the
        first model's factor.
        """
        if (queries is None) == (cross is None):
            raise ValueError("pass exactly one of queries or cross")
        hp = self.hyperparams
        if cross is None:
            cross = cross_kernel_matrix(list(queries), self.train_inputs, self.kernel, hp.amplitude)
        else:
            cross = np.asarray(cross, dtype=np.float64)
            if cross.ndim != 2 or cross.shape[1] != self.n_train:
                raise ValueError(f"cross must be (m, {self.n_train}), got {cross.shape}")
        m = cross.shape[0]
        d = self.n_objectives
        if m == 0:
            return np.empty((0, d)), np.empty((0, d))
        alphas = np.column_stack([mod.solve_vector for mod in self.models])
        means = hp.mean + cross @ alphas
        v = solve_triangular(self.models[0].chol, cross.T, lower=True)
        var = np.clip(hp.amplitude - np.einsum("ij,ij->j", v, v), 0.0, hp.amplitude)
        return means, np.broadcast_to(var[:, None], (m, d)).copy()


def append_observation(
    surrogate: MultiObjectiveSurrogate, fingerprint: CountFingerprint, values
) -> MultiObjectiveSurrogate:
    """Functional alias for MultiObjectiveSurrogate.append."""
    return surrogate.append(fingerprint, values)
