"""Regenerate the committed test fixtures.

    python3 scripts/generate_fixtures.py

Writes tests/fixtures/figure1.csv (golden k=6,7 dataset), ks_ladder.json
(KS convergence ladders and the pinned improvement factor) and
ortho_delta.json (recurrence residuals and the pinned threshold delta).
"""
import json
import math
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from systems import FIGURE1, random_systems  # noqa: E402

from lamezeros.asymptotics import stieltjes_ladder, theta_c, vanvleck_ladder  # noqa: E402
from lamezeros.cli import figure1_csv  # noqa: E402
from lamezeros.orthogonality import recurrence_fit, theta_sequence  # noqa: E402

FIX = ROOT / "tests" / "fixtures"
LADDER_KS = [16, 32, 64, 128]
# the k=128 distance must be at most 1/FACTOR of the k=16 distance
KS_FACTOR = 2.0
ORTHO_SEED = 12
ORTHO_N = 10


def ks_fixture():
    tc = theta_c(FIGURE1)
    out = {"system": FIGURE1.to_dict(), "k": LADDER_KS, "factor": KS_FACTOR,
           "vanvleck": [d for _, d in vanvleck_ladder(FIGURE1, LADDER_KS)], "stieltjes": []}
    for th in (0.0, tc, 1.0):
        out["stieltjes"].append({"theta": th, "distance": [d for _, d in stieltjes_ladder(FIGURE1, th, LADDER_KS)]})
    return out


def ortho_fixture():
    systems = [FIGURE1] + random_systems(5, ORTHO_SEED)
    rows = []
    for s in systems:
        tc = theta_c(s)
        for th in (0.0, 0.25, tc, 0.5, 0.75, 1.0):
            seq = theta_sequence(s, th, ORTHO_N)
            res = [recurrence_fit(seq, n).residual_norm for n in range(2, ORTHO_N + 1)]
            rows.append({"system": s.to_dict(), "theta": th, "residuals": res, "max": max(res)})
    smallest = min(r["max"] for r in rows)
    delta = 10.0 ** math.floor(math.log10(0.1 * smallest))
    return {"N": ORTHO_N, "seed": ORTHO_SEED, "delta": delta, "smallest_max_residual": smallest, "runs": rows}


def main():
    FIX.mkdir(parents=True, exist_ok=True)
    (FIX / "figure1.csv").write_text(figure1_csv(FIGURE1), encoding="utf-8")
    (FIX / "ks_ladder.json").write_text(json.dumps(ks_fixture(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
    (FIX / "ortho_delta.json").write_text(json.dumps(ortho_fixture(), indent=1, sort_keys=True) + "\n",
                                          encoding="utf-8")
    print(f"fixtures written to {FIX}")


if __name__ == "__main__":
    main()
