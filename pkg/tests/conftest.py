"""Shared fixtures: reference parameters and quiet (noise-free) trial configs."""

import pytest

from smaforce.config import load_defaults
from smaforce.harness import TrialConfig, trial_config_from_dict
from smaforce.thermal import ThermalParams, discretize


@pytest.fixture
def ref_params() -> ThermalParams:
    """Identified electrothermal coefficients of the reference wire."""
    return ThermalParams(alpha1=-0.079, alpha2=29.22, t_amb=35.16, dt=0.2)


@pytest.fixture
def ref_coeffs(ref_params):
    return discretize(ref_params)


@pytest.fixture
def defaults() -> dict:
    return load_defaults()


@pytest.fixture
def make_trial(defaults):
    """Factory for TrialConfig objects built from the packaged defaults.

    Keyword overrides: profile, t_set, v_max, seed, sigma_t, sigma_f.
    sigma_t/sigma_f default to 0 so trials are noise-free unless asked.
    """

    def _make(profile="c1", t_set=140.0, v_max=5, seed=1,
              sigma_t=0.0, sigma_f=0.0) -> TrialConfig:
        cfg = {k: (dict(v) if isinstance(v, dict) else v)
               for k, v in defaults.items()}
        cfg["noise"] = dict(cfg["noise"], sigma_t=sigma_t, sigma_f=sigma_f)
        return trial_config_from_dict(
            cfg, profile=profile, t_set=t_set, v_max=v_max, seed=seed
        )

    return _make
