"""Hybrid model against zeta on a window, then the splitting experiment over x."""
import argparse
from dataclasses import dataclass

from zetalab import build_tables, scan_zeros
from zetalab.emit import write_csv
from zetalab.hybrid import HybridConfig, hybrid_compare, splitting_experiment


@dataclass
class HybridRun:
    T: float = 2000.0
    seed: int = 1
    out: str = "hybrid_compare.csv"


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--T", type=float, default=HybridRun.T)
    ap.add_argument("--seed", type=int, default=HybridRun.seed)
    ap.add_argument("--out", default=HybridRun.out)
    cfg = HybridRun(**vars(ap.parse_args()))
    zeros = scan_zeros(cfg.T)
    tables = build_tables(1000)
    cmp = hybrid_compare(50.0, 60.0, 0.05, HybridConfig(1000.0), zeros, tables)
    write_csv(cfg.out, ("t", "abs_model", "abs_zeta", "arg_model", "arg_zeta"), cmp.rows(),
              seed=cfg.seed, config=vars(cfg))
    print("correlation of moduli", cmp.correlation_of_moduli)
    for x in (10.0, 50.0, 200.0):
        r = splitting_experiment(1, cfg.T, x, seed=cfg.seed, zeros=zeros)
        print(f"x={x:6.0f} N={r.N} P={r.prime_moment:.4f} Z={r.matrix_moment:.4f} "
              f"product={r.product:.4f} zeta={r.zeta_moment:.4f} ratio={r.ratio:.4f}")


if __name__ == "__main__":
    main()
