"""
Scoring model predictions against the semantic checker
=======================================================

"""

from logicgen import classify_prediction, emit_report, evaluate, load_predictions
from logicgen.evaluation import PredictionRecord

# A prediction file is formula<TAB>output<TAB>reference. An output that
# matches the reference byte for byte is "syntactic"; one that differs
# but still satisfies the formula is "semantic_only".
lines = [
    "&UabUa!b\t&a!b;b;{1}\t&a!b;b;{1}",    # exact match
    "&UbaUa!a\ta;!a;{1}\t&!ab;a;{1}",      # different trace, still correct
    "Ga\ta;{!a}\t{a}",                      # parses but violates the formula
    "Fb\t;;{\tb;{1}",                       # does not even parse
]
records, rejected = load_predictions(lines, "ltl-trace")
report = evaluate(records, "ltl-trace", rejected=rejected)
print(emit_report(report, fmt="csv"))

# With beam search a model emits several candidates per formula,
# separated by | after the closing brace. Under any-beam scoring the
# best candidate in the beam counts.
beam = PredictionRecord("Ga", ";;{}|{a}", "{a}")
print("rank-1:  ", classify_prediction(beam, "ltl-trace"))
print("any-beam:", classify_prediction(beam, "ltl-trace", any_beam=True))

# Propositional predictions score the same way.
prop = PredictionRecord("|b!&ad", "d0", "a0")
print("prop:    ", classify_prediction(prop, "prop-assignment"))

# Command-line equivalent, bucketing accuracy by formula size:
#   logicgen eval --ltl predictions.tsv --bucket-width 5 -o report.csv
