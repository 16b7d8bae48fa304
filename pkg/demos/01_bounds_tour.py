# %% Lower bounds on concurrence for a few familiar states
import numpy as np

from entbound import bounds, states

# %% Pure states: the bounds are exact on the right level pair
phi = states.phi_plus(3)
print("C(phi+_3)     =", bounds.concurrence_pure(phi))
print("tau(phi+_3)   =", bounds.tau(phi))   # 4/3, equal to C^2

psi = states.state_from_schmidt([0.5, 0.3, 0.2], 3, 3, seed=1)
basis = bounds.LocalBasisPair.from_schmidt(states.schmidt_decompose(psi))
for pair in bounds.all_pairs(3):
    v = bounds.alb(psi, pair, pair, basis)
    print(f"ALB on {tuple(pair)} in the Schmidt basis: {v.raw:.6f}")

# %% Werner family: ALB coincides with the two-qubit closed form
phi2 = states.density_from_pure(states.phi_plus(2)).matrix
for p in (0.2, 1 / 3, 0.6, 0.9):
    rho = states.DensityOperator(2, 2, p * phi2 + (1 - p) * np.eye(4) / 4)
    print(f"p={p:.3f}  ALB={bounds.alb(rho, (0, 1), (0, 1)).raw:.6f}  "
          f"Wootters={bounds.wootters_concurrence(rho):.6f}")

# %% MLB squared is an observable on two copies; it can go negative
rho = states.DensityOperator(2, 2, np.eye(4) / 4)
v = bounds.mlb_squared(rho, 1, (0, 1), (0, 1))
print("maximally mixed: raw", v.raw, "clamped", v.bound)
