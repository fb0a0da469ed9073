"""Scaling table via the experiment driver, plus a log fit.

Equivalent command line:
    awakesim sweep --algo awake_mis --n-list 256,1024,4096 --trials 3 --seed 4
"""

from awakesim.bench import ExperimentConfig, fit_log_scaling, sweep


def main():
    cfg = ExperimentConfig(algorithm="awake_mis", n_list=[256, 1024, 4096],
                           trials=3, master_seed=4)
    table, ok = sweep(cfg)
    print(f"{'n':>6} {'rounds':>8} {'avg awake':>10} {'max awake':>10} {'size':>7}")
    for r in table:
        print(f"{r['n']:>6} {r['mean_rounds']:>8.1f} {r['mean_avg_awake']:>10.2f} "
              f"{r['mean_max_awake']:>10.1f} {r['mean_size']:>7.1f}")
    a, b, r2 = fit_log_scaling([r["n"] for r in table],
                               [r["mean_rounds"] for r in table])
    print(f"all runs valid: {ok}")
    print(f"rounds vs log2 n: a={a:.1f}, b={b:.1f}, R^2={r2:.3f}")


if __name__ == "__main__":
    main()
