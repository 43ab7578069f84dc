import numpy as np
import pytest

from lobbylab import Params


def draw_params(rng: np.random.Generator, *, theta_lo: float = 0.25,
                theta_hi: float = 8.0, mu0_lo: float = 0.05,
                mu0_hi: float = 0.45, tau_lo: float = 0.1,
                tau_hi: float = 0.9) -> Params:
    """One interior parameter draw with theta bounded away from zero."""
    return Params(
        mu0=float(rng.uniform(mu0_lo, mu0_hi)),
        tau=float(rng.uniform(tau_lo, tau_hi)),
        theta=float(np.exp(rng.uniform(np.log(theta_lo), np.log(theta_hi)))),
        gamma=float(rng.uniform(0.05, 0.95)),
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
