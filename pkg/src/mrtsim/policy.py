"""Bayesian linear regression with action centering, smoothed allocation, prior construction.

The reward model is overparameterized for robustness: with state features
``f`` (5-dim), joint features are ``[f, pi*f, (A - pi)*f]`` and the joint
weight vector stacks ``[alpha0, alpha1, beta]``. Only the ``beta`` block (the
advantage) drives action selection; ``alpha1`` shares the advantage prior.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from . import _kernels
from .errors import DataError, NumericalError
from .features import AlgState

logger = logging.getLogger(__name__)

N_FEATURES = 5
N_JOINT = 3 * N_FEATURES

#: Escalating absolute diagonal jitter tried when an SPD factorization fails.
JITTERS = (0.0, 1e-10, 1e-8, 1e-6)


@dataclass(frozen=True)
class PriorSpec:
    """Gaussian prior over the joint weights plus the reward noise variance.

    Variances are diagonal. ``alpha1`` (the action-centering baseline block)
    reuses the advantage prior, so only two mean/variance pairs are stored.
    """

    mu_alpha0: np.ndarray
    var_alpha0: np.ndarray
    mu_beta: np.ndarray
    var_beta: np.ndarray
    sigma2: float

    def __post_init__(self):
        for name in ("mu_alpha0", "var_alpha0", "mu_beta", "var_beta"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (N_FEATURES,):
                raise ValueError(f"{name} must have shape ({N_FEATURES},), got {arr.shape}")
            object.__setattr__(self, name, arr)
        if np.any(self.var_alpha0 <= 0) or np.any(self.var_beta <= 0):
            raise ValueError("prior variances must be strictly positive")
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    def joint_mean(self) -> np.ndarray:
        return np.concatenate([self.mu_alpha0, self.mu_beta, self.mu_beta])

    def joint_var_diag(self) -> np.ndarray:
        return np.concatenate([self.var_alpha0, self.var_beta, self.var_beta])

    def joint_cov(self) -> np.ndarray:
        return np.diag(self.joint_var_diag())

    def to_dict(self) -> dict:
        return {
            "mu_alpha0": self.mu_alpha0.tolist(),
            "var_alpha0": self.var_alpha0.tolist(),
            "mu_beta": self.mu_beta.tolist(),
            "var_beta": self.var_beta.tolist(),
            "sigma2": float(self.sigma2),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PriorSpec":
        return cls(
            mu_alpha0=np.asarray(d["mu_alpha0"], dtype=float),
            var_alpha0=np.asarray(d["var_alpha0"], dtype=float),
            mu_beta=np.asarray(d["mu_beta"], dtype=float),
            var_beta=np.asarray(d["var_beta"], dtype=float),
            sigma2=float(d["sigma2"]),
        )


def canonical_prior() -> PriorSpec:
    """The production prior constants built from the 9-participant pilot."""
    return PriorSpec(
        mu_alpha0=np.array([18.0, 0.0, 30.0, 0.0, 73.0]),
        var_alpha0=np.array([73.0, 25.0, 95.0, 27.0, 83.0]) ** 2,
        mu_beta=np.array([0.0, 0.0, 0.0, 53.0, 0.0]),
        var_beta=np.array([12.0, 33.0, 35.0, 56.0, 17.0]) ** 2,
        sigma2=3878.0,
    )


@dataclass(frozen=True)
class PosteriorState:
    """Joint Gaussian over ``[alpha0, alpha1, beta]``."""

    mu: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        sig = np.asarray(self.sigma, dtype=float)
        if mu.shape != (N_JOINT,) or sig.shape != (N_JOINT, N_JOINT):
            raise ValueError(f"bad posterior shapes: {mu.shape}, {sig.shape}")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(sig))):
            raise NumericalError("non-finite posterior")
        if np.max(np.abs(sig - sig.T)) > 1e-10:
            raise NumericalError("posterior covariance not symmetric within 1e-10")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sig)

    @property
    def beta_mean(self) -> np.ndarray:
        return self.mu[2 * N_FEATURES :]

    @property
    def beta_cov(self) -> np.ndarray:
        return self.sigma[2 * N_FEATURES :, 2 * N_FEATURES :]

    @classmethod
    def from_prior(cls, prior: PriorSpec) -> "PosteriorState":
        return cls(mu=prior.joint_mean(), sigma=prior.joint_cov())


#: Reward-residual scale from the no-intervention study used to standardize the slope.
RESIDUAL_SCALE = 38.83


@dataclass(frozen=True)
class SmoothingParams:
    """Generalized-logistic allocation function parameters.

    The published parameter list shows c = 3 while both the stated value
    rho(0) = 0.3 and the plotted curve require c = 5 under the 0.2/0.8
    asymptotes; c defaults to 5 accordingly and stays configurable.
    """

    l_min: float = 0.2
    l_max: float = 0.8
    c: float = 5.0
    b: float = 20.0 / RESIDUAL_SCALE  # 0.515 to the printed precision
    k: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.l_min < self.l_max < 1.0:
            raise ValueError(f"need 0 < l_min < l_max < 1: {self.l_min}, {self.l_max}")
        if self.b <= 0 or self.c <= 0 or self.k <= 0:
            raise ValueError("b, c, k must be positive")

    def to_dict(self) -> dict:
        return {"l_min": self.l_min, "l_max": self.l_max, "c": self.c, "b": self.b, "k": self.k}

    @classmethod
    def from_dict(cls, d: dict) -> "SmoothingParams":
        return cls(**d)


FLAT_SLOPE = 0.515
STEEP_SLOPE = 5.15

_TABLE_CACHE: dict[float, _kernels.QuadTables] = {}


def _tables_for(k: float) -> _kernels.QuadTables:
    if k not in _TABLE_CACHE:
        _TABLE_CACHE[k] = _kernels.build_quad_tables(k)
    return _TABLE_CACHE[k]


def _state_vector(state) -> np.ndarray:
    if isinstance(state, AlgState):
        return state.vector()
    return np.asarray(state, dtype=float)


def joint_features(state, action: int, pi: float) -> np.ndarray:
    """Joint feature vector ``[f, pi*f, (A - pi)*f]`` of the overparameterized model."""
    f = _state_vector(state)
    return np.concatenate([f, pi * f, (action - pi) * f])


def posterior_update(rows, prior: PriorSpec) -> PosteriorState:
    """Conjugate Gaussian update from ``(state, action, pi, reward)`` tuples.

    With no rows the posterior is the prior, exactly. The linear system is
    solved through a Cholesky factorization of the posterior precision with
    escalating diagonal jitter; no data Gram matrix is ever inverted directly.
    """
    rows = list(rows)
    if len(rows) == 0:
        return PosteriorState.from_prior(prior)
    phi = np.stack([joint_features(s, a, p) for (s, a, p, _r) in rows])
    rewards = np.array([float(r) for (_s, _a, _p, r) in rows])
    return posterior_from_gram(phi.T @ phi, phi.T @ rewards, len(rows), prior)


def posterior_from_gram(
    gram: np.ndarray, moment: np.ndarray, n_rows: int, prior: PriorSpec
) -> PosteriorState:
    """Posterior from accumulated sufficient statistics (Phi'Phi, Phi'R)."""
    if n_rows == 0:
        return PosteriorState.from_prior(prior)
    if not (np.all(np.isfinite(gram)) and np.all(np.isfinite(moment))):
        raise NumericalError("non-finite sufficient statistics in posterior update")
    prior_prec = 1.0 / prior.joint_var_diag()
    precision = gram / prior.sigma2 + np.diag(prior_prec)
    rhs = moment / prior.sigma2 + prior_prec * prior.joint_mean()

    for jitter in JITTERS:
        try:
            chol = linalg.cho_factor(
                precision + jitter * np.eye(N_JOINT), lower=True, check_finite=False
            )
        except linalg.LinAlgError:
            continue
        mu = linalg.cho_solve(chol, rhs, check_finite=False)
        sigma = linalg.cho_solve(chol, np.eye(N_JOINT), check_finite=False)
        sigma = (sigma + sigma.T) / 2.0
        return PosteriorState(mu=mu, sigma=sigma)
    raise NumericalError("posterior precision not SPD after jitter retries")


def rho(x, p: SmoothingParams = SmoothingParams()):
    """Smoothed allocation curve mapping a posterior advantage draw to a probability."""
    arr = _kernels.rho_many(np.atleast_1d(np.asarray(x, dtype=float)), p.l_min, p.l_max, p.c, p.b, p.k)
    return float(arr[0]) if np.isscalar(x) or np.ndim(x) == 0 else arr


def action_prob(state, posterior: PosteriorState, p: SmoothingParams = SmoothingParams()) -> float:
    """Randomization probability E[rho(s' beta)] over the advantage marginal."""
    s = _state_vector(state)
    m = float(s @ posterior.beta_mean)
    v = float(s @ posterior.beta_cov @ s)
    return float(action_prob_batch(np.array([m]), np.array([v]), p)[0])


def action_prob_batch(mean: np.ndarray, var: np.ndarray, p: SmoothingParams) -> np.ndarray:
    """Vectorized allocation probabilities from advantage marginal means/variances."""
    try:
        return _kernels.action_prob_many(
            mean, var, p.l_min, p.l_max, p.c, p.b, p.k, _tables_for(p.k)
        )
    except ValueError as exc:
        raise NumericalError(str(exc)) from exc


def action_prob_states(states: np.ndarray, posterior: PosteriorState, p: SmoothingParams) -> np.ndarray:
    """Allocation probabilities for a batch of state vectors ``(n, 5)``."""
    mean = states @ posterior.beta_mean
    var = np.einsum("ni,ij,nj->n", states, posterior.beta_cov, states)
    return action_prob_batch(mean, var, p)


def select_action(pi: float, rng: np.random.Generator) -> int:
    """Micro-randomized Bernoulli(pi) draw from the caller's named stream."""
    return int(rng.random() < pi)


@dataclass
class PilotFitReport:
    """Per-dimension diagnostics from fitting the pilot participants."""

    theta: np.ndarray                 # (n_participants, 15) fitted weights
    effect_sizes: np.ndarray          # (n_participants, 15) standardized effects
    mean_effect_sizes: np.ndarray     # (15,)
    significant: np.ndarray           # (15,) bool after the advantage-intercept rule
    residual_variances: np.ndarray    # (n_participants,)
    rank_deficient: list = field(default_factory=list)   # participant indices


def build_prior_from_pilot(
    pilot_rows: list,
    ridge_lambda: float = 1e-3,
    significance_threshold: float = 0.15,
) -> tuple[PriorSpec, PilotFitReport]:
    """Construct the informative prior from pilot participants' trajectories.

    ``pilot_rows`` holds one entry per participant: a sequence of
    ``(state, action, pi, q)`` tuples. Each participant's 15-parameter
    action-centering model is fit with an L2 penalty on all coefficients.
    A feature is significant when the mean standardized effect across
    participants exceeds the threshold in absolute value; the advantage
    intercept is declared insignificant whenever its mean effect is negative,
    since a prompt is not allowed to hurt the immediate outcome. Significant
    features keep their empirical mean and SD; insignificant ones get mean 0
    and half the empirical SD for extra shrinkage.
    """
    n_participants = len(pilot_rows)
    if n_participants == 0:
        raise DataError("no pilot participants supplied")
    thetas = np.zeros((n_participants, N_JOINT))
    effects = np.zeros((n_participants, N_JOINT))
    resid_vars = np.zeros(n_participants)
    rank_deficient: list[int] = []

    for i, rows in enumerate(pilot_rows):
        rows = list(rows)
        if len(rows) < 2:
            raise DataError(f"pilot participant {i} has fewer than 2 decision points")
        phi = np.stack([joint_features(s, a, p) for (s, a, p, _q) in rows])
        q = np.array([float(v) for (_s, _a, _p, v) in rows])
        if np.linalg.matrix_rank(phi) < N_JOINT:
            rank_deficient.append(i)
            logger.warning("pilot participant %d has rank-deficient design; ridge carries the fit", i)
        theta = np.linalg.solve(
            phi.T @ phi + ridge_lambda * np.eye(N_JOINT), phi.T @ q
        )
        thetas[i] = theta
        sigma_i = float(np.std(q, ddof=1))
        if sigma_i == 0.0:
            raise DataError(f"pilot participant {i} has constant outcomes")
        effects[i] = theta / sigma_i
        resid = q - phi @ theta
        resid_vars[i] = float(np.var(resid, ddof=1))

    mean_eff = effects.mean(axis=0)
    significant = np.abs(mean_eff) > significance_threshold
    adv_intercept = N_JOINT - 1
    if mean_eff[adv_intercept] < 0:
        significant[adv_intercept] = False

    emp_mean = thetas.mean(axis=0)
    emp_sd = thetas.std(axis=0, ddof=1)
    prior_mean = np.where(significant, emp_mean, 0.0)
    prior_sd = np.where(significant, emp_sd, emp_sd / 2.0)
    prior_sd = np.maximum(prior_sd, 1e-8)  # keep variances strictly positive

    spec = PriorSpec(
        mu_alpha0=prior_mean[:N_FEATURES],
        var_alpha0=prior_sd[:N_FEATURES] ** 2,
        mu_beta=prior_mean[2 * N_FEATURES :],
        var_beta=prior_sd[2 * N_FEATURES :] ** 2,
        sigma2=float(resid_vars.mean()),
    )
    report = PilotFitReport(
        theta=thetas,
        effect_sizes=effects,
        mean_effect_sizes=mean_eff,
        significant=significant,
        residual_variances=resid_vars,
        rank_deficient=rank_deficient,
    )
    return spec, report
