"""Build the synthetic dataset the other demos and the CLI run on.

Three institutions publishing in two subject categories over 2001-2002,
with inverted percentiles (smaller = better, 100 = uncited). The three
groups are tuned to clearly different impact profiles: one average, one
strong, one slightly above average. Writes demos/data/institutions.csv.
"""

from pathlib import Path

import numpy as np

OUT = Path(__file__).parent / "data" / "institutions.csv"

SIZES = {"1": 268, "2": 549, "3": 488}
TARGET_MEAN = {"1": 49.7, "2": 32.2, "3": 46.0}


def build(path: Path = OUT, seed: int = 20012002) -> Path:
    rng = np.random.default_rng(seed)
    rows = []
    k = 0
    for inst, n in SIZES.items():
        # percentile profile: uniform, recentered on the institution target
        pct = rng.uniform(0.0, 100.0, n)
        pct = np.clip(pct + (TARGET_MEAN[inst] - pct.mean()), 0.0, 100.0)
        for p in pct:
            year = 2001 if rng.random() < 0.5 else 2002
            cat = "PHYS_CM" if rng.random() < 0.7 else "PHYS_CM|MATER_SCI"
            # fewer citations for worse (higher) percentiles, noisy
            citations = max(0, int(rng.normal((100.0 - p) / 4.0, 1.5)))
            rows.append(f"p{k},{inst},{year},{cat},{citations},{p:.4f}")
            k += 1
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        "id,institution,pub_year,category,citations,inv_percentile\n"
        + "\n".join(rows)
        + "\n",
        encoding="utf-8",
    )
    return path


if __name__ == "__main__":
    out = build()
    print(f"wrote {sum(SIZES.values())} records for {len(SIZES)} institutions to {out}")
