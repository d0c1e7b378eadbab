"""Small Monte-Carlo error grid (a desk-size slice of the published tables).

Run:  python demos/04_error_grid.py   (~2 minutes)

The full protocol (more J values, rates, and 50+ trials) is driven by the
CLI:  lrhankel grid --methods lrhm,lrhmf --j 1,5,10 --rate 0.15,0.25 \
          --trials 50 --sigma 0.05 --seed 0 --out grid.csv
"""

from lrhankel.bench import ExperimentSpec, run_grid

spec = ExperimentSpec(
    methods=("lrhmf", "zero_fill"),
    j_values=(1, 5),
    rates=(0.15, 0.25),
    trials=10,
    noise_sigma=0.05,
    base_seed=0,
)
result = run_grid(spec)
print(result.to_csv())

print("threshold classification (largest solvable J):")
for method, by_rate in result.threshold_report().items():
    print(f"  {method}: {by_rate}")
for note in result.warnings:
    print("note:", note)
