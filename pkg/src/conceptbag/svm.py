"""L2-regularized squared-hinge linear SVM, trained by primal Newton-CG."""

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatch, NonFiniteFeature


@dataclass
class SvmConfig:
    C: float = 1.0
    max_epochs: int = 1000
    tolerance: float = 1e-6
    seed: int = 0


@dataclass
class LinearModel:
    w: np.ndarray
    trained_C: float
    objective_trace: list[float] = field(default_factory=list)


def svm_objective(w: np.ndarray, features, labels, C: float) -> float:
    """0.5 w.w + C sum_i max(0, 1 - y_i w.f_i)^2."""
    w = np.asarray(w, dtype=np.float64)
    scores = _scores(features, w)
    labels = np.asarray(labels, dtype=np.float64)
    if len(scores) != len(labels):
        raise DimensionMismatch(f"{len(scores)} rows vs {len(labels)} labels")
    margins = np.maximum(0.0, 1.0 - labels * scores)
    return float(0.5 * w @ w + C * (margins**2).sum())


def svm_gradient(w: np.ndarray, features, labels, C: float) -> np.ndarray:
    """Analytic gradient of svm_objective (the loss is differentiable)."""
    w = np.asarray(w, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    margins = np.maximum(0.0, 1.0 - labels * _scores(features, w))
    coeff = -2.0 * C * margins * labels
    if sp.issparse(features):
        grad = np.asarray(sp.csr_matrix(features).T @ coeff).ravel()
    else:
        grad = np.asarray(features).T @ coeff
    return w + grad


def _scores(features, w) -> np.ndarray:
    if sp.issparse(features):
        return np.asarray(features @ w).ravel()
    return np.asarray(features, dtype=np.float64) @ w


def svm_train(features, labels, config: SvmConfig = SvmConfig()) -> LinearModel:
    """Newton-CG with Armijo backtracking on the primal objective.

    The squared-hinge primal is smooth and strongly convex; each outer
    iteration solves the generalized-Newton system by conjugate gradients
    and backtracks until sufficient decrease, so the recorded per-iteration
    objective trace is non-increasing. Stops when the gradient norm falls
    below config.tolerance. Fully deterministic (config.seed is unused).
    """
    y = np.asarray(labels, dtype=np.float64)
    if sp.issparse(features):
        X = sp.csr_matrix(features).astype(np.float64)
        if not np.all(np.isfinite(X.data)):
            raise NonFiniteFeature("feature matrix contains NaN or inf")
    else:
        X = np.asarray(features, dtype=np.float64)
        if not np.all(np.isfinite(X)):
            raise NonFiniteFeature("feature matrix contains NaN or inf")
    if X.shape[0] != len(y):
        raise DimensionMismatch(f"{X.shape[0]} rows vs {len(y)} labels")
    d = X.shape[1]
    C = config.C

    def matvec(v):
        return np.asarray(X @ v).ravel()

    def rmatvec(u):
        return np.asarray(X.T @ u).ravel()

    w = np.zeros(d)
    scores = np.zeros(len(y))
    obj = svm_objective(w, X, y, C)
    trace = [obj]
    for _ in range(config.max_epochs):
        slack = 1.0 - y * scores
        active = slack > 0.0
        grad = w - rmatvec(2.0 * C * slack * active * y)
        gnorm = np.linalg.norm(grad)
        if gnorm < config.tolerance:
            break

        def hessvec(v):
            u = matvec(v)
            return v + rmatvec(2.0 * C * active * u)

        step = _cg(hessvec, -grad, max_iter=max(50, d), tol=min(0.1, gnorm) * gnorm)
        # Armijo backtracking guarantees monotone decrease
        t = 1.0
        descent = grad @ step
        if descent >= 0.0:
            step = -grad
            descent = -gnorm**2
        for _ in range(60):
            w_new = w + t * step
            obj_new = svm_objective(w_new, X, y, C)
            if obj_new <= obj + 1e-4 * t * descent:
                break
            t *= 0.5
        if obj_new > obj:
            break
        w = w_new
        scores = matvec(w)
        obj = obj_new
        trace.append(obj)
    return LinearModel(w=w, trained_C=C, objective_trace=trace)


def _cg(hessvec, b, max_iter, tol):
    """Conjugate gradients for the (positive definite) Newton system."""
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = r @ r
    for _ in range(max_iter):
        if np.sqrt(rs) < tol:
            break
        hp = hessvec(p)
        alpha = rs / (p @ hp)
        x += alpha * p
        r -= alpha * hp
        rs_new = r @ r
        p = r + (rs_new / rs) * p
        rs = rs_new
    return x


def svm_predict(model: LinearModel, f) -> np.ndarray:
    """Sign of w.f per row; an exact zero score maps to +1."""
    f = np.atleast_2d(np.asarray(f, dtype=np.float64)) if not sp.issparse(f) else f
    if f.shape[1] != len(model.w):
        raise DimensionMismatch(f"features have dim {f.shape[1]}, model {len(model.w)}")
    scores = _scores(f, model.w)
    return np.where(scores >= 0.0, 1, -1).astype(np.int64)


def save_model(model: LinearModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"dim {len(model.w)}\n")
        fh.write(f"C {float(model.trained_C)!r}\n")
        for v in model.w:
            fh.write(f"{float(v)!r}\n")


def load_model(path) -> LinearModel:
    with open(path, "r", encoding="utf-8") as fh:
        dim = int(fh.readline().split()[1])
        c_val = float(fh.readline().split()[1])
        w = np.array([float(fh.readline()) for _ in range(dim)])
    return LinearModel(w=w, trained_C=c_val)
