"""
Generating a random LTL trace dataset
=====================================

"""

from logicgen import GenConfig, gen_random_ltl, split_dataset
from logicgen.datagen import dataset_stats, record_to_line

# Sizes are drawn uniformly between min_size and max_size; every record
# is unique, satisfiable, and comes with a solved witness trace.
cfg = GenConfig(count=200, seed=11, props=("a", "b", "c", "d", "e"),
                min_size=1, max_size=35)
records, stats = gen_random_ltl(cfg)

print("emitted:", len(records))
print("unsat draws discarded:", stats.unsat)
print("starved sizes:", stats.starved)

print("\nfirst three records (formula<TAB>trace):")
for rec in records[:3]:
    print(" ", record_to_line(rec))

# Size histograms: quasi-uniform except the smallest sizes, which run out
# of distinct formulas before meeting their quota.
formula_hist, answer_hist = dataset_stats(records)
print("\nformula size histogram (size: count):")
for size in sorted(formula_hist)[:8]:
    print(f"  {size}: {formula_hist[size]}")
print("longest answer, in trace tokens:", max(answer_hist))

# Deterministic 80/10/10 split for training pipelines.
train, val, test = split_dataset(records, (0.8, 0.1, 0.1), seed=0)
print("\nsplit sizes:", len(train), len(val), len(test))

# The same dataset from the command line, with a manifest sidecar:
#   logicgen gen-random-ltl --count 200 --seed 11 -o data/ltl.tsv
#   logicgen split --ltl data/ltl.tsv --ratios 0.8,0.1,0.1 -o data/ltl
