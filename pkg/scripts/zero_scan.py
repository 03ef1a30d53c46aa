"""Scan zeros up to a height, save the table and print N(T) against its main term."""
import argparse
from dataclasses import dataclass

from zetalab import scan_zeros
from zetalab.zeros import save_zero_table, zero_counts_report


@dataclass
class ScanConfig:
    t_max: float = 1000.0
    grid_step: float = 0.05
    out: str = "zeros.txt"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t-max", type=float, default=ScanConfig.t_max)
    ap.add_argument("--grid-step", type=float, default=ScanConfig.grid_step)
    ap.add_argument("--out", default=ScanConfig.out)
    cfg = ScanConfig(**vars(ap.parse_args()))
    table = scan_zeros(cfg.t_max, cfg.grid_step)
    save_zero_table(table, cfg.out)
    for T in (100.0, cfg.t_max / 2, cfg.t_max):
        r = zero_counts_report(table, T)
        print(f"T={T:10.1f}  N={r.count:6d}  main={r.main_term:10.3f}  defect={r.defect:+.3f}")


if __name__ == "__main__":
    main()
