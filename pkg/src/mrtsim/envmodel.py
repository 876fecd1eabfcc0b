"""Participant environment models fit from no-intervention brushing data.

Each participant gets two candidate generative models for their brushing
quality ``Q`` (seconds, zero-inflated):

* zero-inflated Poisson: ``Q = Z * Y`` with ``Z ~ Bern(1 - sigmoid(g'w_b))``
  and ``Y ~ Poisson(exp(g'w_p))``, fit jointly by MAP;
* square-root hurdle: ``Q = Z * Y^2`` with the same gate and
  ``Y ~ Normal(g'w_mu, sigma_u^2)`` fit on the square root of the nonzero
  records, gate and normal component fit separately.

Model weights carry a standard-normal prior as regularization. The class
with the lower root-sum-squared error of the conditional mean wins; ties go
to the zero-inflated Poisson. Treatment effects are imputed from the fitted
baseline weights, scaled by ``zeta``, and sampled per participant with a
fixed sign map.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from scipy import optimize, special

from .errors import DataError, NumericalError
from .reward import proximal_outcome

logger = logging.getLogger(__name__)

MODEL_ZIP = "zip"
MODEL_HURDLE = "hurdle_sqrt"

# z-score constants for the prior-day brushing feature and the study-day feature
OSCB_SHIFT, OSCB_SCALE = 154.0, 163.0
DAY_SHIFT, DAY_SCALE = 35.5, 34.5

#: Baseline feature order (non-stationary); the stationary variant drops day_norm.
BASELINE_NAMES = ("time_of_day", "prior_day_oscb_norm", "weekend", "prop_nonzero_past7", "day_norm", "intercept")
#: Treatment feature order (non-stationary); stationary drops day_norm.
TREATMENT_NAMES = ("time_of_day", "prior_day_oscb_norm", "weekend", "day_norm", "intercept")

#: Baseline-weight indices feeding each non-intercept treatment dimension.
TREAT_FROM_BASE = {True: (0, 1, 2), False: (0, 1, 2, 4)}  # keyed by stationary

#: Signs applied to sampled effect magnitudes, in treatment-feature order.
#: Evening prompts help (+), strong recent brushing dampens the effect (-),
#: weekends help (+), late study days dampen (-), intercept helps (+).
TREATMENT_SIGNS = {True: np.array([1.0, -1.0, 1.0, 1.0]), False: np.array([1.0, -1.0, 1.0, -1.0, 1.0])}

N_RESTARTS = 10
GRAD_TOL = 1e-6
MAX_EXP_ARG = 40.0  # caps the Poisson log-rate inside the optimizer


def normalize_oscb(x):
    return (np.asarray(x, dtype=float) - OSCB_SHIFT) / OSCB_SCALE


def normalize_day(day):
    return (np.asarray(day, dtype=float) - DAY_SHIFT) / DAY_SCALE


def baseline_dim(stationary: bool) -> int:
    return 5 if stationary else 6


def treatment_dim(stationary: bool) -> int:
    return 4 if stationary else 5


def treatment_features_from_baseline(g: np.ndarray, stationary: bool) -> np.ndarray:
    """Project baseline feature rows onto the treatment feature space."""
    g = np.atleast_2d(g)
    idx = list(TREAT_FROM_BASE[stationary])
    h = np.column_stack([g[:, idx], np.ones(g.shape[0])])
    return h


@dataclass(frozen=True)
class ParticipantEnvModel:
    """Fitted baseline generative model for one participant and one variant."""

    participant_id: str
    model_class: str
    stationary: bool
    w_b: np.ndarray                 # Bernoulli gate weights
    w_y: np.ndarray                 # Poisson log-rate or Normal mean weights
    sigma_u2: float | None = None   # hurdle only
    log_posterior: float = float("nan")

    def __post_init__(self):
        if self.model_class not in (MODEL_ZIP, MODEL_HURDLE):
            raise ValueError(f"unknown model class {self.model_class!r}")
        if self.model_class == MODEL_HURDLE and not (self.sigma_u2 and self.sigma_u2 > 0):
            raise ValueError("hurdle model requires sigma_u2 > 0")
        d = baseline_dim(self.stationary)
        if self.w_b.shape != (d,) or self.w_y.shape != (d,):
            raise ValueError(f"weights must have dim {d}")

    def to_dict(self) -> dict:
        return {
            "participant_id": self.participant_id,
            "model_class": self.model_class,
            "stationary": self.stationary,
            "w_b": self.w_b.tolist(),
            "w_y": self.w_y.tolist(),
            "sigma_u2": self.sigma_u2,
            "log_posterior": self.log_posterior,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParticipantEnvModel":
        return cls(
            participant_id=str(d["participant_id"]),
            model_class=d["model_class"],
            stationary=bool(d["stationary"]),
            w_b=np.asarray(d["w_b"], dtype=float),
            w_y=np.asarray(d["w_y"], dtype=float),
            sigma_u2=d.get("sigma_u2"),
            log_posterior=float(d.get("log_posterior", float("nan"))),
        )


def _zip_neg_log_posterior(params: np.ndarray, g: np.ndarray, q: np.ndarray):
    d = g.shape[1]
    w_b, w_p = params[:d], params[d:]
    gb = g @ w_b
    gp = np.minimum(g @ w_p, MAX_EXP_ARG)
    lam = np.exp(gp)
    log_s = -np.logaddexp(0.0, -gb)        # log sigmoid(gb)
    log_1ms = -np.logaddexp(0.0, gb)       # log (1 - sigmoid(gb))

    zero = q == 0
    ll = np.empty_like(q)
    # P(Q=0) = s + (1-s) e^{-lam}
    ll[zero] = np.logaddexp(log_s[zero], log_1ms[zero] - lam[zero])
    nz = ~zero
    ll[nz] = log_1ms[nz] + q[nz] * gp[nz] - lam[nz] - special.gammaln(q[nz] + 1.0)
    nlp = -(ll.sum() - 0.5 * params @ params)

    # gradient
    s = special.expit(gb)
    grad_gb = np.empty_like(q)
    grad_gp = np.empty_like(q)
    p0 = np.exp(ll[zero])  # P(Q=0), safely in (0, 1]
    grad_gb[zero] = s[zero] * (1.0 - s[zero]) * (1.0 - np.exp(-lam[zero])) / p0
    grad_gp[zero] = -lam[zero] * np.exp(log_1ms[zero] - lam[zero]) / p0
    grad_gb[nz] = -s[nz]
    grad_gp[nz] = q[nz] - lam[nz]
    grad = np.concatenate([g.T @ grad_gb, g.T @ grad_gp]) - params
    return nlp, -grad


def _bern_neg_log_posterior(w: np.ndarray, g: np.ndarray, is_zero: np.ndarray):
    gb = g @ w
    # P(Q=0) = sigmoid(gb)
    ll = -(is_zero * np.logaddexp(0.0, -gb) + (1 - is_zero) * np.logaddexp(0.0, gb)).sum()
    nlp = -(ll - 0.5 * w @ w)
    grad = g.T @ (is_zero - special.expit(gb)) - w
    return nlp, -grad


def _normal_neg_log_posterior(params: np.ndarray, g: np.ndarray, y: np.ndarray):
    w, log_sd = params[:-1], params[-1]
    sd = np.exp(log_sd)
    resid = y - g @ w
    n = y.shape[0]
    ll = -0.5 * n * np.log(2 * np.pi) - n * log_sd - 0.5 * (resid @ resid) / sd**2
    nlp = -(ll - 0.5 * w @ w)
    grad_w = (g.T @ resid) / sd**2 - w
    grad_log_sd = -n + (resid @ resid) / sd**2
    return nlp, -np.concatenate([grad_w, [grad_log_sd]])


def _map_fit(fun, x0_dim: int, args, rng: np.random.Generator, n_restarts: int = N_RESTARTS):
    best = None
    for _ in range(n_restarts):
        x0 = rng.standard_normal(x0_dim)
        res = optimize.minimize(
            fun, x0, args=args, jac=True, method="L-BFGS-B",
            options={"maxiter": 500, "gtol": GRAD_TOL, "ftol": 1e-12},
        )
        if not np.all(np.isfinite(res.x)):
            continue
        if best is None or res.fun < best.fun:
            best = res
    if best is None:
        raise NumericalError("all optimizer restarts failed")
    return best


def fit_baseline(
    g: np.ndarray,
    q: np.ndarray,
    model_class: str,
    participant_id: str = "?",
    stationary: bool = True,
    rng: np.random.Generator | None = None,
    n_restarts: int = N_RESTARTS,
) -> ParticipantEnvModel:
    """MAP fit of one participant's baseline model with random restarts."""
    if rng is None:
        rng = np.random.default_rng(0)
    g = np.asarray(g, dtype=float)
    q = np.asarray(q, dtype=float)
    d = g.shape[1]
    if d != baseline_dim(stationary):
        raise ValueError(f"feature dim {d} does not match stationary={stationary}")

    if model_class == MODEL_ZIP:
        best = _map_fit(_zip_neg_log_posterior, 2 * d, (g, q), rng, n_restarts)
        return ParticipantEnvModel(
            participant_id=participant_id, model_class=MODEL_ZIP, stationary=stationary,
            w_b=best.x[:d].copy(), w_y=best.x[d:].copy(), log_posterior=-float(best.fun),
        )
    if model_class == MODEL_HURDLE:
        is_zero = (q == 0).astype(float)
        nz = q > 0
        if not np.any(nz):
            raise DataError(
                f"participant {participant_id}: no nonzero records for the hurdle normal component"
            )
        bern = _map_fit(_bern_neg_log_posterior, d, (g, is_zero), rng, n_restarts)
        y = np.sqrt(q[nz])
        norm = _map_fit(_normal_neg_log_posterior, d + 1, (g[nz], y), rng, n_restarts)
        return ParticipantEnvModel(
            participant_id=participant_id, model_class=MODEL_HURDLE, stationary=stationary,
            w_b=bern.x.copy(), w_y=norm.x[:-1].copy(),
            sigma_u2=float(np.exp(2.0 * norm.x[-1])),
            log_posterior=-(float(bern.fun) + float(norm.fun)),
        )
    raise ValueError(f"unknown model class {model_class!r}")


def model_mean(model: ParticipantEnvModel, g: np.ndarray) -> np.ndarray:
    """Conditional mean E[Q | S] of the fitted baseline model."""
    g = np.atleast_2d(np.asarray(g, dtype=float))
    nonzero_prob = 1.0 - special.expit(g @ model.w_b)
    if model.model_class == MODEL_ZIP:
        return nonzero_prob * np.exp(g @ model.w_y)
    return nonzero_prob * (model.sigma_u2 + (g @ model.w_y) ** 2)


def select_model(
    g: np.ndarray, q: np.ndarray, zip_fit: ParticipantEnvModel, hurdle_fit: ParticipantEnvModel
) -> str:
    """Class with the lower root-sum-squared error of the conditional mean; ties go ZIP."""
    q = np.asarray(q, dtype=float)
    l_zip = float(np.sqrt(np.sum((q - model_mean(zip_fit, g)) ** 2)))
    l_hurdle = float(np.sqrt(np.sum((q - model_mean(hurdle_fit, g)) ** 2)))
    return MODEL_ZIP if l_zip <= l_hurdle else MODEL_HURDLE


@dataclass(frozen=True)
class EffectSizeSpec:
    """Population-level treatment effect distribution for one model class."""

    zeta: float
    stationary: bool
    model_class: str
    delta_b: np.ndarray   # mean magnitudes, Bernoulli component (treatment order)
    delta_n: np.ndarray   # mean magnitudes, Poisson/Normal component
    var_b: np.ndarray     # diagonal variances
    var_n: np.ndarray

    def to_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "stationary": self.stationary,
            "model_class": self.model_class,
            "delta_b": self.delta_b.tolist(),
            "delta_n": self.delta_n.tolist(),
            "var_b": self.var_b.tolist(),
            "var_n": self.var_n.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EffectSizeSpec":
        return cls(
            zeta=float(d["zeta"]), stationary=bool(d["stationary"]), model_class=d["model_class"],
            delta_b=np.asarray(d["delta_b"], dtype=float),
            delta_n=np.asarray(d["delta_n"], dtype=float),
            var_b=np.asarray(d["var_b"], dtype=float),
            var_n=np.asarray(d["var_n"], dtype=float),
        )


def _population_block(weights: np.ndarray, zeta: float) -> tuple[np.ndarray, np.ndarray]:
    """Means and variances of zeta-scaled absolute weights, intercept entry appended.

    The intercept entry is the across-feature mean of the feature means (and
    the across-feature mean of the variances), which lands it at roughly the
    scale of the other entries; variances are population (ddof 0) variances.
    """
    eta = zeta * np.abs(weights)               # (participants, features)
    means = eta.mean(axis=0)
    variances = eta.var(axis=0)
    mean_vec = np.concatenate([means, [means.mean()]])
    var_vec = np.concatenate([variances, [variances.mean()]])
    return mean_vec, var_vec


def impute_population_effects(fits: list[ParticipantEnvModel], zeta: float) -> EffectSizeSpec:
    """Population effect-size spec from all participants' fits of one model class."""
    if not fits:
        raise DataError("no fits supplied")
    stationary = fits[0].stationary
    model_class = fits[0].model_class
    if any(f.stationary != stationary or f.model_class != model_class for f in fits):
        raise ValueError("fits must share a variant and model class")
    idx = list(TREAT_FROM_BASE[stationary])
    wb = np.stack([f.w_b[idx] for f in fits])
    wy = np.stack([f.w_y[idx] for f in fits])
    delta_b, var_b = _population_block(wb, zeta)
    delta_n, var_n = _population_block(wy, zeta)
    return EffectSizeSpec(
        zeta=zeta, stationary=stationary, model_class=model_class,
        delta_b=delta_b, delta_n=delta_n, var_b=var_b, var_n=var_n,
    )


def sample_participant_effects(
    spec: EffectSizeSpec, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Draw one participant's effect vectors: normal draw, folded, sign-mapped."""
    signs = TREATMENT_SIGNS[spec.stationary]
    raw_b = rng.normal(spec.delta_b, np.sqrt(spec.var_b))
    raw_n = rng.normal(spec.delta_n, np.sqrt(spec.var_n))
    return signs * np.abs(raw_b), signs * np.abs(raw_n)


def generate_q(
    model: ParticipantEnvModel,
    g: np.ndarray,
    h: np.ndarray,
    actions: np.ndarray,
    delta_b: np.ndarray,
    delta_n: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    """Vectorized outcome generation under actions (un-truncated Q).

    The Bernoulli-gate bump enters with a minus sign (a prompt reduces the
    zero probability); both bumps are clamped at zero so an unfavourable
    context never flips the effect's direction.
    """
    g = np.atleast_2d(g)
    h = np.atleast_2d(h)
    actions = np.asarray(actions, dtype=float)
    bump_b = actions * np.maximum(h @ delta_b, 0.0)
    bump_n = actions * np.maximum(h @ delta_n, 0.0)
    z = rng.random(g.shape[0]) < (1.0 - special.expit(g @ model.w_b - bump_b))
    if model.model_class == MODEL_ZIP:
        y = rng.poisson(np.exp(np.minimum(g @ model.w_y + bump_n, MAX_EXP_ARG)))
        return np.where(z, y.astype(float), 0.0)
    y = rng.normal(g @ model.w_y + bump_n, np.sqrt(model.sigma_u2))
    return np.where(z, y**2, 0.0)


@dataclass
class EffectVerificationReport:
    theta1: float
    sigma_res: float
    sigma_reward: float
    ratio_res: float
    ratio_reward: float
    n_rows: int


def verify_effect_sizes(
    models: list[ParticipantEnvModel],
    effects: list[tuple[np.ndarray, np.ndarray]],
    state_matrices: list[np.ndarray],
    rng: np.random.Generator,
    n_points: int = 140,
) -> EffectVerificationReport:
    """Three-step standardized-effect check on intercept-only treatment bumps.

    For each participant, states are resampled with replacement and outcomes
    generated under both actions with only the intercept effect applied. A
    pooled least-squares fit of ``R = g' theta0 + A theta1`` yields the
    standardized ratios reported for sanity-checking the imputation scale.
    """
    g_rows, a_rows, r_rows = [], [], []
    for model, (db, dn), states in zip(models, effects, state_matrices):
        pick = rng.integers(0, states.shape[0], size=n_points)
        g = states[pick]
        db1 = np.zeros_like(db)
        dn1 = np.zeros_like(dn)
        db1[-1] = db[-1]
        dn1[-1] = dn[-1]
        h = treatment_features_from_baseline(g, model.stationary)
        for a in (0, 1):
            actions = np.full(n_points, a)
            q = generate_q(model, g, h, actions, db1, dn1, rng)
            g_rows.append(g)
            a_rows.append(actions)
            r_rows.append(q)
    g_all = np.vstack(g_rows)
    a_all = np.concatenate(a_rows).astype(float)
    r_all = np.concatenate(r_rows)
    design = np.column_stack([g_all, a_all])
    theta, *_ = np.linalg.lstsq(design, r_all, rcond=None)
    resid = r_all - design @ theta
    sigma_res = float(np.std(resid, ddof=1))
    sigma_reward = float(np.std(r_all, ddof=1))
    theta1 = float(theta[-1])
    return EffectVerificationReport(
        theta1=theta1,
        sigma_res=sigma_res,
        sigma_reward=sigma_reward,
        ratio_res=theta1 / sigma_res,
        ratio_reward=theta1 / sigma_reward,
        n_rows=r_all.shape[0],
    )


# ---------------------------------------------------------------------------
# Data ingestion and fitted-model bundles
# ---------------------------------------------------------------------------

#: Default column names for brushing CSVs; remappable at ingestion because
#: public exports vary. Semantics: one row per (participant, day, window).
DEFAULT_COLUMNS = {
    "participant_id": "participant_id",
    "day": "day",
    "is_morning": "is_morning",
    "brush_time": "brush_time",
    "pressure_time": "pressure_time",
}

MAX_DAYS = 70  # truncate each participant to the anticipated study duration


def read_brushing_csv(path, column_map: dict | None = None) -> dict[str, pd.DataFrame]:
    """Read a brushing study CSV into per-participant frames with Q attached.

    Rows are sorted by (day, evening-flag), truncated to the first
    ``MAX_DAYS`` days, and ``q`` is the pressure-corrected truncated outcome.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"brushing data file not found: {path}")
    cols = dict(DEFAULT_COLUMNS)
    if column_map:
        cols.update(column_map)
    df = pd.read_csv(path, comment="#")
    missing = [c for c in cols.values() if c not in df.columns]
    if missing:
        raise DataError(f"brushing CSV {path} lacks columns {missing}; have {list(df.columns)}")

    out: dict[str, pd.DataFrame] = {}
    for pid, grp in df.groupby(cols["participant_id"], sort=True):
        grp = grp.copy()
        grp["_day"] = grp[cols["day"]].astype(int)
        grp["_morning"] = grp[cols["is_morning"]].astype(int)
        grp = grp[grp["_day"] <= MAX_DAYS]
        grp = grp.sort_values(["_day", "_morning"], ascending=[True, False])
        q = [
            proximal_outcome(b, p)
            for b, p in zip(grp[cols["brush_time"]].astype(float), grp[cols["pressure_time"]].astype(float))
        ]
        out[str(pid)] = pd.DataFrame(
            {"day": grp["_day"].to_numpy(), "is_morning": grp["_morning"].to_numpy(), "q": q}
        ).reset_index(drop=True)
    if not out:
        raise DataError(f"no participants found in {path}")
    return out


def is_weekend(day) -> np.ndarray:
    """Days 6 and 7 of each study week count as the weekend."""
    day = np.asarray(day, dtype=int)
    return (((day - 1) % 7) >= 5).astype(float)


def build_design(frame: pd.DataFrame, stationary: bool) -> tuple[np.ndarray, np.ndarray]:
    """Baseline feature matrix and outcome vector for one participant's frame."""
    days = frame["day"].to_numpy(int)
    morning = frame["is_morning"].to_numpy(int)
    q = frame["q"].to_numpy(float)
    n = len(frame)

    day_totals: dict[int, float] = {}
    for d, val in zip(days, q):
        day_totals[d] = day_totals.get(d, 0.0) + val
    prior_day = np.array([day_totals.get(d - 1, 0.0) for d in days])

    prop_nonzero = np.zeros(n)
    nonzero = (q > 0).astype(float)
    for i in range(n):
        lo = max(0, i - 14)
        window = nonzero[lo:i]
        prop_nonzero[i] = window.mean() if window.size else 0.0

    cols = [
        (1 - morning).astype(float),  # time of day: morning 0, evening 1
        normalize_oscb(prior_day),
        is_weekend(days),
        prop_nonzero,
    ]
    if not stationary:
        cols.append(normalize_day(days))
    cols.append(np.ones(n))
    return np.column_stack(cols), q


def fit_participants(
    data: dict[str, pd.DataFrame],
    stationary: bool,
    seed: int = 0,
    n_restarts: int = N_RESTARTS,
) -> dict[str, dict]:
    """Fit both model classes for every participant and select one per RMSE."""
    from .rng import substream

    results: dict[str, dict] = {}
    for k, (pid, frame) in enumerate(sorted(data.items())):
        g, q = build_design(frame, stationary)
        rng = substream(seed, 1000 + int(stationary), k)
        zip_fit = fit_baseline(g, q, MODEL_ZIP, pid, stationary, rng, n_restarts)
        hurdle_fit = fit_baseline(g, q, MODEL_HURDLE, pid, stationary, rng, n_restarts)
        selected = select_model(g, q, zip_fit, hurdle_fit)
        results[pid] = {
            "zip": zip_fit,
            "hurdle": hurdle_fit,
            "selected": selected,
            "rmse": {
                MODEL_ZIP: float(np.sqrt(np.mean((q - model_mean(zip_fit, g)) ** 2))),
                MODEL_HURDLE: float(np.sqrt(np.mean((q - model_mean(hurdle_fit, g)) ** 2))),
            },
            "n_rows": int(len(q)),
        }
        logger.info("fit %s stationary=%s selected=%s", pid, stationary, selected)
    return results


@dataclass
class EnvModelBundle:
    """All fitted models plus the effect-size specs derived from them."""

    fits: dict  # {variant_key: {pid: {"zip": model, "hurdle": model, "selected": str}}}
    effect_specs: dict  # {(variant_key, zeta_key, model_class): EffectSizeSpec}
    meta: dict

    VARIANTS = ("stationary", "non_stationary")
    ZETAS = {"1/8": 0.125, "1/4": 0.25}

    def selected_models(self, stationary: bool) -> list[ParticipantEnvModel]:
        key = "stationary" if stationary else "non_stationary"
        entry = self.fits[key]
        return [entry[pid][entry[pid]["selected"]] for pid in sorted(entry)]

    def spec_for(self, stationary: bool, zeta_key: str, model_class: str) -> EffectSizeSpec:
        key = "stationary" if stationary else "non_stationary"
        return self.effect_specs[(key, zeta_key, model_class)]

    def to_json_dict(self) -> dict:
        fits = {
            vk: {
                pid: {
                    "zip": entry["zip"].to_dict(),
                    "hurdle": entry["hurdle"].to_dict(),
                    "selected": entry["selected"],
                    "rmse": entry["rmse"],
                    "n_rows": entry["n_rows"],
                }
                for pid, entry in by_pid.items()
            }
            for vk, by_pid in self.fits.items()
        }
        specs = {
            f"{vk}|{zk}|{mc}": spec.to_dict()
            for (vk, zk, mc), spec in self.effect_specs.items()
        }
        return {"meta": self.meta, "fits": fits, "effect_specs": specs}

    @classmethod
    def from_json_dict(cls, d: dict) -> "EnvModelBundle":
        fits = {
            vk: {
                pid: {
                    "zip": ParticipantEnvModel.from_dict(entry["zip"]),
                    "hurdle": ParticipantEnvModel.from_dict(entry["hurdle"]),
                    "selected": entry["selected"],
                    "rmse": entry.get("rmse", {}),
                    "n_rows": entry.get("n_rows", 0),
                }
                for pid, entry in by_pid.items()
            }
            for vk, by_pid in d["fits"].items()
        }
        specs = {}
        for key, spec in d["effect_specs"].items():
            vk, zk, mc = key.split("|")
            specs[(vk, zk, mc)] = EffectSizeSpec.from_dict(spec)
        return cls(fits=fits, effect_specs=specs, meta=d.get("meta", {}))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), indent=1, sort_keys=True))

    @classmethod
    def load(cls, path) -> "EnvModelBundle":
        path = Path(path)
        if not path.exists():
            raise DataError(f"environment model bundle not found: {path}")
        return cls.from_json_dict(json.loads(path.read_text()))


def build_bundle(
    data: dict[str, pd.DataFrame], seed: int = 0, n_restarts: int = N_RESTARTS, meta: dict | None = None
) -> EnvModelBundle:
    """Fit everything: both variants, both classes, all effect-size specs."""
    fits = {}
    specs = {}
    for vk, stationary in (("stationary", True), ("non_stationary", False)):
        by_pid = fit_participants(data, stationary, seed=seed, n_restarts=n_restarts)
        fits[vk] = by_pid
        for mc in (MODEL_ZIP, MODEL_HURDLE):
            class_fits = [by_pid[pid]["zip" if mc == MODEL_ZIP else "hurdle"] for pid in sorted(by_pid)]
            for zk, zeta in EnvModelBundle.ZETAS.items():
                specs[(vk, zk, mc)] = impute_population_effects(class_fits, zeta)
    return EnvModelBundle(fits=fits, effect_specs=specs, meta=meta or {})
