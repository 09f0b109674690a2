"""Replicated PCE study on the 15-input Oakley & O'Hagan function.

The coefficient file is not shipped; create it first with

    python scripts/fetch_oakley_data.py --from-salib --out data/oakley_ohagan.csv

(or pass ``--from-text`` / ``--url``), then run

    python demos/05_oakley_ohagan_study.py [path-to-csv]
"""

import sys
from pathlib import Path

import numpy as np

from pcedgsm.study import StudyConfig, emit_report, run_study

root = Path(__file__).resolve().parents[1]
data = Path(sys.argv[1]) if len(sys.argv) > 1 else root / "data" / "oakley_ohagan.csv"
if not data.is_file():
    sys.exit(f"coefficient file {data} not found; see the docstring of this script")

config = StudyConfig(model="oakley", n=600, method="lar", replications=10, seed=0, oo_data=str(data))
report = run_study(config, workers=4)

s_t = report.median("pce", "s_total")
s_d = report.median("pce", "s_dgsm")
for k in np.argsort(s_t)[::-1]:
    print(f"{report.variables[k]:4} S_T {s_t[k]:.4f}  DGSM {s_d[k]:.4f}")
print("least influential:", [report.variables[k] for k in np.argsort(s_t)[:4]])
print("wrote", emit_report(report, "svg", Path(__file__).with_name("out") / "oakley_study.svg"))
