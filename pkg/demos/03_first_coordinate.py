"""Exact law of the first preference and its boundary approximations."""

# %%
from parking import laws

m, n = 400, 500
pmf = laws.pmf_first_coordinate(m, n)
print("plateau        ", float(laws.plateau_value(m, n)), float(pmf[0]))
print("right endpoint ", float(laws.right_end_value(m, n)), float(pmf[-1]))

# %% Near the right end, n P(pi_1 = n - j) approaches 1 - Q(j + 2), a Borel tail
for j in range(5):
    exact = float(n * pmf[n - j - 1])
    approx = laws.boundary_laws(m, n, j).right_end
    print(f"j={j}  exact {exact:.5f}  limit {approx:.5f}  rel {abs(exact - approx) / approx:.2e}")

# %% Mean of pi_1: exact versus the two-term expansion
for n in (100, 200, 400):
    exact = float(laws.moment_first(n // 2, n, 1))
    print(n, exact, laws.moment_first_asymptotic(n // 2, n, 1))
print("m = n = 100:", float(laws.moment_first(100, 100, 1)), laws.moment_first_asymptotic(100, 100, 1))
