# Acquisitions x seeds benchmark with the aggregate report.
#
# The suite reruns the identical experiment per (method, seed), sharing
# the seed's initial archive across methods so differences come from the
# selection policy alone. Summary statistics and effect sizes follow.

from mobobench.acquisition import AcquisitionConfig
from mobobench.data import generate_synthetic
from mobobench.engine import RunConfig, run_suite

_, pool = generate_synthetic(seed=9, n=300)

config = RunConfig(
    acquisition=AcquisitionConfig(kind="ehvi", mc_samples=300),
    rounds=10,
    init_size=8,
)
suite = run_suite(
    pool,
    config,
    seeds=(1, 2, 3),
    acquisitions=("ehvi", "scalarized_ei", "random"),
)

print("per-trial final hypervolume")
for trial in suite.trials:
    print(f"  {trial.acquisition:<14} seed {trial.seed}: hv {trial.final_hypervolume:.5f}, r2 {trial.final_r2:.5f}")

print("\nmethod means over seeds")
for kind in suite.acquisitions:
    m = suite.methods[kind]
    print(f"  {kind:<14} hv {m.hv_mean:.5f} ± {m.hv_std:.5f}   r2 {m.r2_mean:.5f} ± {m.r2_std:.5f}")

print("\npairwise effect sizes (hypervolume)")
for pair in suite.effect_sizes:
    d = "undefined" if pair.hypervolume.cohens_d is None else f"{pair.hypervolume.cohens_d:+.3f}"
    print(f"  {pair.first} vs {pair.second}: Cohen's d {d}, Cliff's delta {pair.hypervolume.cliffs_delta:+.3f}")

# the same report lands on disk as summary.txt / summary.json through the
# command line:
#   mobobench synth --out pool.jsonl --seed 9 --n 300
#   mobobench suite --dataset pool.jsonl --out results \
#       --acquisitions ehvi,scalarized-ei,random --seeds 1,2,3 --rounds 10
