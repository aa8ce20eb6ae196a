"""Parking a single preference list, then moving it through the forest bijections."""

# %% Park nine cars on twelve spots
from parking import ParkingFunction, park
from parking.forests import (
    BfsVersion, forest_to_pf, forest_to_pf_knuth, inversions, pf_to_forest, pf_to_forest_knuth,
)
from parking.pfcore import displacement, lucky_count, specification, unattempted_spots

pf = ParkingFunction(9, 12, (6, 1, 4, 1, 8, 3, 6, 11, 8))
outcome = park(pf.prefs, pf.m, pf.n)
print("slots      ", outcome.slots)
print("holes      ", unattempted_spots(pf))
print("spec r     ", specification(pf))
print("disp, lucky", displacement(pf), lucky_count(pf))

# %% Level-order BFS: spot k hands its cars to the k-th vertex in BFS order
forest = pf_to_forest(pf)
print(forest.to_text())
assert forest_to_pf(forest) == pf

# %% Tree-by-tree BFS gives a different forest for the same list
tbt = pf_to_forest(pf, BfsVersion.TREE_BY_TREE)
print(tbt.to_text())
assert forest_to_pf(tbt, BfsVersion.TREE_BY_TREE) == pf

# %% The Knuth-style map turns displacement into inversions
knuth = pf_to_forest_knuth(pf)
print(knuth.to_text(), "| inversions", inversions(knuth), "| disp", displacement(pf))
assert forest_to_pf_knuth(knuth) == pf

# %% Graphviz output, ready for `dot -Tpng`
print(knuth.to_dot())
