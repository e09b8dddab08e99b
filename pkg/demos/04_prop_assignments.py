"""
Partial assignments for propositional formulas
==============================================

"""

from logicgen import (
    GenConfig,
    PartialAssignment,
    check_partial_assignment,
    derive_partial_assignment,
    falsifying_completion,
    parse_assignment,
    parse_prop,
)
from logicgen.datagen import gen_cnf_dataset

# The prop task asks for a partial assignment that forces the formula
# true no matter how the unassigned propositions are completed.
formula = parse_prop("|&ab&!ac", props=("a", "b", "c"))
assignment = derive_partial_assignment(formula)
print("formula:   |&ab&!ac")
print("assignment:", assignment)
print("forces true:", check_partial_assignment(formula, assignment))

# Setting only a=1 is not enough: b and c can both be false.
weak = parse_assignment("a1", props=("a", "b", "c"))
print("\na1 forces true:", check_partial_assignment(formula, weak))
print("falsifying completion:", falsifying_completion(formula, weak))

# The assignment is minimal: dropping any pair breaks it.
pairs = assignment.items
for i, (name, _) in enumerate(pairs):
    smaller = PartialAssignment(pairs[:i] + pairs[i + 1:])
    still_ok = check_partial_assignment(formula, smaller)
    print(f"without {name}: forces true = {still_ok}")

# Random satisfiable CNF instances come with minimal assignments too.
records, _ = gen_cnf_dataset(GenConfig(count=3, seed=9, max_vars=6))
print("\nCNF records (formula<TAB>assignment):")
for rec in records:
    print(f"  {rec.formula}\t{rec.answer}")

# Command-line equivalents:
#   logicgen solve --prop '|&ab&!ac'
#   logicgen check --prop '|&ab&!ac' a1
#   logicgen gen-cnf --count 3 --seed 9 --max-vars 6 -o cnf.tsv
