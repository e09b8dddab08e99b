"""
Building hard instances from specification patterns
====================================================

"""

import random

from logicgen import GenConfig, instantiate_pattern, load_patterns, print_ltl
from logicgen.datagen import PATTERN_CATALOGS, gen_pattern_conjunctions

# Four catalogs of temporal specification patterns ship with the package;
# load_patterns accepts a catalog name or a path to a pattern file.
for name in PATTERN_CATALOGS:
    patterns = load_patterns(name)
    print(f"catalog {name}: {len(patterns)} patterns")

# A pattern is a formula over placeholder propositions p0, p1, ...;
# instantiation maps the placeholders to distinct concrete propositions.
dac = load_patterns("dac")
rng = random.Random(5)
inst = instantiate_pattern(dac[0], ("a", "b", "c", "d", "e", "f"), rng)
print("\npattern:", print_ltl(dac[0]))
print("instance:", print_ltl(inst))

# The generator conjoins random instances until a size or conjunct cap
# is hit, keeping only satisfiable conjunctions, and solves each one.
cfg = GenConfig(count=5, seed=5, props=("a", "b", "c", "d", "e", "f"),
                max_size=126, max_conjuncts=8, timeout_s=1.0)
records, stats = gen_pattern_conjunctions(dac, cfg)
for rec in records:
    print(f"\nsize {rec.size}: {rec.formula}")
    print(f"  trace: {rec.answer}")
print("\nstop conditions seen:", stats.conditions)

# The command-line equivalents:
#   logicgen gen-pattern --catalog dac --count 5 --seed 5 -o pat.tsv
#   logicgen gen-unsolved --count 100 -o hard.tsv   (keeps only timeouts)
