"""
Solving formulas and checking candidate traces
==============================================

"""

from logicgen import check_containment, parse_ltl, parse_trace, solve_ltl

# A request/response property: whenever a holds, b must hold later,
# and b must eventually happen at least once.
formula = parse_ltl("&G>aFbFb", props=("a", "b"))
print("formula:", "&G>aFbFb")

# The solver returns a symbolic lasso: a finite prefix, then a cycle.
trace = solve_ltl(formula)
print("solver trace:", trace)

# The containment checker verifies that every concretization of a
# symbolic trace satisfies the formula.
result = check_containment(trace, formula)
print("solver trace holds:", result.holds)

# A trace that only ever does a, never b, violates the property.
bad = parse_trace("a;{a}", props=("a", "b"))
result = check_containment(bad, formula)
print("bad trace holds:", result.holds)
print("counterexample:", result.witness)

# The same pair through the command line:
#   logicgen solve --ltl '&G>aFbFb'
#   logicgen check --ltl '&G>aFbFb' 'a;{a}'
