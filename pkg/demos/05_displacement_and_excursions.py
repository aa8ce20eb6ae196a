"""Displacement moments, the shuffle decomposition, and an excursion profile."""

# %%
from parking import laws
from parking.enumerators import enumerate_pf
from parking.pfcore import ParkingFunction, displacement
from parking.randomized import disp_from_coordinates, excursion_csv, shuffle_coordinates, shuffle_decompose

for m, n in [(2, 2), (5, 5), (3, 5)]:
    mom = laws.disp_moments_exact(m, n)
    print(f"PF({m},{n}) mean {mom.mean} variance {mom.variance}")
print("asymptotic at m=n=1000:", laws.disp_moments_asymptotic(1000, 1000))

# %% Every tail splits into a generalized part below k and a classical part above it
pf = ParkingFunction(5, 6, (3, 1, 5, 2, 5))
w = shuffle_decompose(pf.prefs[1:], pf.n)
print(w)
assert w.recompose() == pf.prefs[1:]

# %% Displacement recovered from shuffle coordinates
assert all(disp_from_coordinates(shuffle_coordinates(p)) == displacement(p) for p in enumerate_pf(4, 5))

# %% Scaled empirical profile of one segment, for plotting elsewhere
print(excursion_csv(ParkingFunction(9, 12, (6, 1, 4, 1, 8, 3, 6, 11, 8)), 0, 8))
