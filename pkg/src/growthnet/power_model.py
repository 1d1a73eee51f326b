"""Energy per firing event and network power under power-law ensembles."""

from __future__ import annotations

from dataclasses import dataclass

from .constants import PHI_0, PLANCK_H
from .graph_core import InvalidArgumentError
from .scaling_laws import normalization, power_integral


@dataclass(frozen=True)
class PowerParams:
    planck_h: float = PLANCK_H
    nu: float = 2.5e14  # optical frequency, Hz
    eta: float = 1e-4  # end-to-end photon production efficiency
    zeta: float = 10.0  # photons per synaptic connection
    chi: float = 1.0 / 3.0  # fraction of synapses firing to reach threshold
    n_fq: float = 245.0  # fluxons per synapse event
    i_c: float = 40e-6  # junction critical current, A
    phi0: float = PHI_0
    gamma: float = 1.4  # degree exponent
    mu: float = 2.0  # frequency exponent
    k_min: float = 17.0
    k_max: float = 745.0
    f_min: float = 100.0
    f_max: float = 20e6

    def __post_init__(self):
        if min(self.planck_h, self.nu, self.eta, self.zeta, self.chi, self.n_fq, self.i_c, self.phi0) <= 0:
            raise InvalidArgumentError("all physical parameters must be positive")
        if self.mu <= 1.0:
            raise InvalidArgumentError("mu must exceed 1")
        if not (0 < self.f_min < self.f_max):
            raise InvalidArgumentError("need 0 < f_min < f_max")
        if not (0 < self.k_min < self.k_max):
            raise InvalidArgumentError("need 0 < k_min < k_max")


def unit_energy(params: PowerParams) -> tuple[float, float, float]:
    """(E0, photonic addend, fluxonic addend), joules per unit degree."""
    photonic = params.zeta * params.planck_h * params.nu / params.eta
    fluxonic = params.chi * params.n_fq * params.i_c * params.phi0
    return photonic + fluxonic, photonic, fluxonic


def firing_energy(k: float, params: PowerParams) -> tuple[float, float, float]:
    """Energy of one firing event at degree k, with the term breakdown."""
    if k < 0:
        raise InvalidArgumentError("degree must be non-negative")
    e0, ph, fx = unit_energy(params)
    return e0 * k, ph * k, fx * k


def frequency_normalization(mu: float, f_min: float, f_max: float) -> float:
    """B2 normalizing B2 f**-mu on [f_min, f_max]."""
    if f_min <= 0 or f_max <= f_min:
        raise InvalidArgumentError("need 0 < f_min < f_max")
    return 1.0 / power_integral(-mu, f_min, f_max)


def mean_frequency(params: PowerParams) -> float:
    b2 = frequency_normalization(params.mu, params.f_min, params.f_max)
    return b2 * power_integral(1.0 - params.mu, params.f_min, params.f_max)


def mean_k(params: PowerParams) -> float:
    b1 = normalization(params.gamma, params.k_min, params.k_max)
    return b1 * power_integral(1.0 - params.gamma, params.k_min, params.k_max)


def network_power(n_tot: float, params: PowerParams) -> float:
    """Closed form of the separable double integral: N E0 <k> <f>."""
    e0, _, _ = unit_energy(params)
    return n_tot * e0 * mean_k(params) * mean_frequency(params)


def power_density(power: float, area: float) -> float:
    if area <= 0:
        raise InvalidArgumentError("area must be positive")
    return power / area


def scaling_exponents(params: PowerParams) -> tuple[float, float]:
    """Integrand decay exponents: power goes as k**-(gamma-1), area as
    k**-(gamma-1.4); the fixed 0.4 gap is why density falls with scale."""
    return params.gamma - 1.0, params.gamma - 1.4


def spectral_density_exponent(mu: float) -> float:
    """P_N(f) decays as f**-(mu-1); mu = 2 is the 1/f case."""
    return mu - 1.0
