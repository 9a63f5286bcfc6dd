"""Two specimens, two histories, one probe temperature.

Conditions one fresh specimen at 140 degC and another at 230 degC for a
hundred cycles each, then re-cycles both at 140 degC and compares their
blocked forces at the same temperature. The hot-conditioned specimen
retains roughly half the force -- overheating does permanent damage that
cycling at a safe temperature cannot undo.
"""

from smaforce import load_defaults, trial_config_from_dict
from smaforce.harness import ab_comparison

base = trial_config_from_dict(load_defaults(), profile="c1", v_max=150)
res = ab_comparison(base, t_low=140.0, t_high=230.0, cycles=150)

print(f"conditioning: {res['n_condition']} cycles at each specimen's "
      f"own temperature, then {res['n_recycle']} cycles at 140 degC")
print(f"blocked force at 140 degC after the 140 degC history: "
      f"{res['f_low']:.3f} N")
print(f"blocked force at 140 degC after the 230 degC history: "
      f"{res['f_high']:.3f} N")
print(f"retained fraction: {res['ratio']:.2f}")
