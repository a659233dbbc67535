"""Samplers and the pinned scenario registry for simulation studies.

Families: von Mises, wrapped Cauchy and wrapped skew-normal, plus
mixtures of them, and a circular-covariate regression model with uniform
design and Gaussian noise.  Scenario parameters live in scenarios.json
(shipped with the package) so tests, docs and the CLI agree on one source
of truth; D1, D3, D4 and the regression mean function are documented
stand-ins, see the note in that file.
"""

import json
import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .density import CircularSample
from .kernels import TWO_PI, vm_kernel, wrap
from .regression import CircLinearSample

__all__ = [
    "MixtureComponent",
    "MixtureSpec",
    "RegressionModel",
    "sample_von_mises",
    "sample_wrapped_cauchy",
    "sample_wrapped_skew_normal",
    "sample_mixture",
    "sample_regression",
    "mixture_density",
    "scenario",
    "scenario_names",
    "regression_scenario",
    "load_registry",
]

_FAMILIES = {"von_mises", "wrapped_cauchy", "wrapped_skew_normal"}


@dataclass(frozen=True)
class MixtureComponent:
    family: str
    params: dict
    weight: float

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.weight > 0:
            raise ValueError("component weights must be positive")


@dataclass(frozen=True)
class MixtureSpec:
    """Weighted mixture of circular distributions; weights must sum to 1."""

    components: tuple
    name: str = ""
    standin: bool = False

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise ValueError("mixture needs at least one component")
        total = math.fsum(c.weight for c in comps)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"component weights sum to {total}, not 1")
        object.__setattr__(self, "components", comps)

    @property
    def weights(self):
        return np.array([c.weight for c in self.components])


@dataclass(frozen=True)
class RegressionModel:
    """2*pi-periodic mean function plus homoskedastic Gaussian noise."""

    mean_function: callable
    noise_sd: float
    name: str = ""
    standin: bool = False

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be nonnegative")


def sample_von_mises(mu, kappa, n, rng):
    """n i.i.d. draws from vM(mu, kappa); kappa=0 is the circular uniform."""
    if kappa == 0:
        return CircularSample(rng.uniform(0.0, TWO_PI, n))
    return CircularSample(wrap(rng.vonmises(mu, kappa, n)))


def sample_wrapped_cauchy(mu, rho, n, rng):
    """n i.i.d. draws from the wrapped Cauchy with mean mu, concentration rho."""
    if not 0 <= rho < 1:
        raise ValueError("rho must lie in [0, 1)")
    if rho == 0:
        return CircularSample(rng.uniform(0.0, TWO_PI, n))
    gamma = -math.log(rho)  # linear Cauchy scale giving concentration rho
    return CircularSample(wrap(mu + gamma * rng.standard_cauchy(n)))


def sample_wrapped_skew_normal(xi, omega, shape, n, rng):
    """n i.i.d. draws from a skew-normal SN(xi, omega, shape), wrapped.

    Uses the two-normal representation z = delta*|u0| + sqrt(1-delta^2)*u1
    with delta = shape / sqrt(1 + shape^2).
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    delta = shape / math.sqrt(1.0 + shape * shape)
    u0 = rng.standard_normal(n)
    u1 = rng.standard_normal(n)
    z = delta * np.abs(u0) + math.sqrt(1.0 - delta * delta) * u1
    return CircularSample(wrap(xi + omega * z))


_SAMPLERS = {
    "von_mises": lambda p, n, rng: sample_von_mises(p["mu"], p["kappa"], n, rng),
    "wrapped_cauchy": lambda p, n, rng: sample_wrapped_cauchy(p["mu"], p["rho"], n, rng),
    "wrapped_skew_normal": lambda p, n, rng: sample_wrapped_skew_normal(
        p["xi"], p["omega"], p["shape"], n, rng
    ),
}


def sample_mixture(spec, n, rng, return_labels=False):
    """n draws from a mixture: pick a component per weight, then sample it.

    A single-component spec bypasses label drawing, so it consumes the rng
    exactly like the component's own sampler.
    """
    comps = spec.components
    if len(comps) == 1:
        out = _SAMPLERS[comps[0].family](comps[0].params, n, rng)
        if return_labels:
            return out, np.zeros(n, dtype=int)
        return out
    labels = rng.choice(len(comps), size=n, p=spec.weights)
    angles = np.empty(n)
    for j, comp in enumerate(comps):
        mask = labels == j
        cnt = int(mask.sum())
        if cnt:
            angles[mask] = _SAMPLERS[comp.family](comp.params, cnt, rng).angles
    out = CircularSample(angles)
    if return_labels:
        return out, labels
    return out


def _wrapped_cauchy_density(theta, mu, rho):
    return (1.0 - rho * rho) / (
        TWO_PI * (1.0 + rho * rho - 2.0 * rho * np.cos(theta - mu))
    )


_erf = np.vectorize(math.erf)


def _wrapped_skew_normal_density(theta, xi, omega, shape, k_max=12):
    theta = np.asarray(theta, dtype=float)
    total = np.zeros_like(theta)
    for k in range(-k_max, k_max + 1):
        x = (theta + TWO_PI * k - xi) / omega
        phi = np.exp(-0.5 * x * x) / math.sqrt(TWO_PI)
        cdf = 0.5 * (1.0 + _erf(shape * x / math.sqrt(2.0)))
        total += 2.0 / omega * phi * cdf
    return total


def mixture_density(spec, theta):
    """Analytic density of the mixture at theta (scalar or array)."""
    theta = np.asarray(theta, dtype=float)
    total = np.zeros_like(theta, dtype=float)
    for comp in spec.components:
        p = comp.params
        if comp.family == "von_mises":
            val = vm_kernel(theta - p["mu"], p["kappa"])
        elif comp.family == "wrapped_cauchy":
            val = _wrapped_cauchy_density(theta, p["mu"], p["rho"])
        else:
            val = _wrapped_skew_normal_density(theta, p["xi"], p["omega"], p["shape"])
        total += comp.weight * np.asarray(val)
    if total.ndim == 0:
        return float(total)
    return total


def sample_regression(model, n, rng):
    """Uniform circular design with Y_i = f(Theta_i) + Normal(0, sd^2) noise."""
    if n < 2:
        raise ValueError("regression sample needs at least 2 observations")
    theta = rng.uniform(0.0, TWO_PI, n)
    y = model.mean_function(theta) + rng.normal(0.0, model.noise_sd, n)
    return CircLinearSample(theta, y)


def load_registry():
    """The raw scenario registry shipped with the package."""
    with resources.files(__package__).joinpath("scenarios.json").open() as fh:
        return json.load(fh)


def scenario_names():
    return sorted(load_registry()["density"])


def scenario(name):
    """Pinned density scenario (D1..D4) as a MixtureSpec."""
    registry = load_registry()["density"]
    if name not in registry:
        raise KeyError(
            f"unknown scenario {name!r}; valid names: {', '.join(sorted(registry))}"
        )
    entry = registry[name]
    comps = tuple(
        MixtureComponent(
            family=c["family"],
            params={k: v for k, v in c.items() if k not in ("family", "weight")},
            weight=c["weight"],
        )
        for c in entry["components"]
    )
    return MixtureSpec(components=comps, name=name, standin=entry["standin"])


def _bump_mean(bumps):
    def f(theta):
        theta = np.asarray(theta, dtype=float)
        total = np.zeros_like(theta)
        for b in bumps:
            total += b["amplitude"] * np.exp(
                b["concentration"] * (np.cos(theta - b["center"]) - 1.0)
            )
        return total

    return f


def regression_scenario(name="R1"):
    """Pinned regression model (mean function and noise sd)."""
    registry = load_registry()["regression"]
    if name not in registry:
        raise KeyError(
            f"unknown regression scenario {name!r}; valid names: "
            f"{', '.join(sorted(registry))}"
        )
    entry = registry[name]
    return RegressionModel(
        mean_function=_bump_mean(entry["mean_bumps"]),
        noise_sd=math.sqrt(entry["noise_variance"]),
        name=name,
        standin=entry["standin"],
    )
