"""Table of I_k(sigma, T) and its normalizations on the critical line and at sigma = 2."""
import argparse
import math
from dataclasses import dataclass, field

from zetalab import scan_zeros
from zetalab.emit import write_csv
from zetalab.moments import conjectured_moment, moment_integral


@dataclass
class MomentsConfig:
    heights: list = field(default_factory=lambda: [500.0, 1000.0, 2000.0])
    out: str = "moments.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--heights", type=float, nargs="+", default=MomentsConfig().heights)
    ap.add_argument("--out", default=MomentsConfig.out)
    cfg = MomentsConfig(**vars(ap.parse_args()))
    zeros = scan_zeros(max(cfg.heights))
    rows = []
    for T in cfg.heights:
        for k in (1, 2):
            est = moment_integral(k, 0.5, T, zeros=zeros)
            rows.append((k, 0.5, T, est.value, est.value / conjectured_moment(k, T)))
        off = moment_integral(1, 2.0, T)
        rows.append((1, 2.0, T, off.value, off.value / (T * math.pi ** 4 / 90)))
    write_csv(cfg.out, ("k", "sigma", "T", "I_k", "ratio_to_prediction"), rows,
              config=vars(cfg))
    for r in rows:
        print(*(f"{v:.6g}" if isinstance(v, float) else v for v in r))


if __name__ == "__main__":
    main()
