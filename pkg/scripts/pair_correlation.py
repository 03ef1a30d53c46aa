"""Montgomery F(alpha) and the pair histogram for zeros, CUE and GUE."""
import argparse
from dataclasses import dataclass

import numpy as np

from zetalab import scan_zeros
from zetalab.emit import write_csv
from zetalab.paircorr import montgomery_F, montgomery_F_theoretical, pair_histogram
from zetalab.rmt import eigen_pair_correlation


@dataclass
class PairConfig:
    T: float = 5000.0
    seed: int = 1
    out: str = "form_factor.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=PairConfig.T)
    ap.add_argument("--seed", type=int, default=PairConfig.seed)
    ap.add_argument("--out", default=PairConfig.out)
    cfg = PairConfig(**vars(ap.parse_args()))
    zeros = scan_zeros(cfg.T)
    rows = [(a, montgomery_F(a, zeros, cfg.T).F, montgomery_F_theoretical(a, cfg.T))
            for a in np.linspace(0.05, 2.0, 40)]
    write_csv(cfg.out, ("alpha", "F_empirical", "F_theory"), rows, seed=cfg.seed,
              config=vars(cfg))
    print("zeros sup distance", pair_histogram(zeros, cfg.T).sup_distance())
    for ens, N in (("cue", 100), ("gue", 200)):
        h = eigen_pair_correlation(ens, N, 200, seed=cfg.seed)
        print(ens, "sup distance", h.sup_distance())


if __name__ == "__main__":
    main()
