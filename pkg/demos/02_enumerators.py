"""Counting formulas and generating polynomials, checked against brute force."""

# %%
from parking import enumerators as en

for n in range(6):
    row = [en.count_pf(m, n) for m in range(n + 1)]
    assert row == [en.count_pf_recursive(m, n) for m in range(n + 1)]
    print(n, row)

# %% Displacement and forest inversions share one enumerator
for m, s in [(3, 1), (3, 2), (4, 2)]:
    d = en.disp_enumerator(m, s)
    print(f"D({m},{s}) =", d)
    assert d == en.inv_enumerator(m, s) == en.disp_enumerator_brute(m, s)

# %% The literal shuffle recurrence only agrees when s = 1 or m <= 2
print("shuffle D(3,2) =", en.disp_enumerator_shuffle(3, 2))
print("true    D(3,2) =", en.disp_enumerator(3, 2))

# %% Tutte polynomial of K_{n+1} from classical parking functions
for n in range(1, 5):
    t = en.tutte_complete(n)
    assert t == en.tutte_from_pf(n)
    print(f"T(K{n + 1}) =", t)

# %% Lucky cars
print("lucky gf PF(3,4):", en.lucky_gf(3, 4))
