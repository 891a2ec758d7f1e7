"""Zero-violation sweeps, driven the same way as the command line.

Each config is the JSON a user would pass with --sweep. The reports carry the
instances closest to each bound, which is where a bug would show up first.
"""

import json

from largersieve.cli import run_verify
from largersieve.harness import SweepConfig

configs = [
    {"target": "thm3", "degrees": [2, 3], "q_range": [2, 300], "coeff_box": 3, "samples": 2000,
     "options": {"random_q_max": 2000}},
    {"target": "thm4", "degrees": [2, 4], "q_range": [2, 600], "options": {"two_power_alpha": 14}},
    {"target": "lemma3", "degrees": [2, 6], "q_range": [2, 800]},
    {"target": "hensel", "samples": 500, "seed": 3},
    {"target": "sieve", "samples": 200},
    {"target": "lemma7", "samples": 200},
]

for raw in configs:
    cfg = SweepConfig.from_dict(raw)
    rep = run_verify(cfg)
    print(f"{cfg.target:>7}: {rep.instances_checked:>9} checked, {len(rep.violations)} violations")
    if rep.extremal_witnesses:
        top = dict(rep.extremal_witnesses[0])
        print(f"         closest ratio {top.pop('ratio'):.3f}: {json.dumps(top)[:90]}")
