"""Monte Carlo moments of |Z_N(U, 0)| over CUE against the exact finite-N values."""
import argparse
import math
from dataclasses import dataclass

from zetalab.emit import write_csv
from zetalab.rmt import cue_moment_mc


@dataclass
class RmtConfig:
    samples: int = 10_000
    seed: int = 1
    out: str = "cue_moments.csv"


def exact_moment(N, k):
    # prod_{j<N} j! (j+2k)! / ((j+k)!)^2
    return math.prod(math.gamma(j + 1) * math.gamma(j + 2 * k + 1) / math.gamma(j + k + 1) ** 2
                     for j in range(N))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=RmtConfig.samples)
    ap.add_argument("--seed", type=int, default=RmtConfig.seed)
    ap.add_argument("--out", default=RmtConfig.out)
    cfg = RmtConfig(**vars(ap.parse_args()))
    rows = []
    for k in (1, 2):
        for N in (10, 20, 40):
            r = cue_moment_mc(N, k, cfg.samples, cfg.seed)
            rows.append((N, k, r.value, r.est_error, exact_moment(N, k)))
            print(N, k, f"{r.value:.6g} +- {r.est_error:.3g}  exact {exact_moment(N, k):.6g}")
    write_csv(cfg.out, ("N", "k", "mc", "stderr", "exact"), rows, seed=cfg.seed,
              config=vars(cfg))


if __name__ == "__main__":
    main()
