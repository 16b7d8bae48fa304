# %% Bound trajectories for two qutrits with noise on one side
import numpy as np

from entbound import lindblad, states

phi = states.density_from_pure(states.phi_plus(3))

# %% Spontaneous decay and pure dephasing, Gamma t in [0, 5]
for name, gamma in (("decay", lindblad.spontaneous_decay_gamma()),
                    ("decoherence", lindblad.decoherence_gamma())):
    model = lindblad.LindbladModel(gamma)
    traj = lindblad.evolve(phi, model, 5.0, 1e-3, every=250)
    lindblad.bound_trajectory(traj, (1, 2), (1, 2))
    raw = traj.series["raw"]
    hits = np.flatnonzero(traj.series["clamped"] <= 0)
    print(f"{name}: raw(0)={raw[0]:.6f} raw(5)={raw[-1]:.6f} "
          f"first zero at t={traj.times[hits[0]] if hits.size else None}")
    for t, r in zip(traj.times[::4], raw[::4]):
        print(f"   t={t:4.1f}  {r:+.6f}")

# %% The same curve for any Schmidt-diagonal input, up to a constant factor
w = [0.5, 0.3, 0.2]
psi = states.PureBipartiteState(3, 3, np.diag(np.sqrt(w)).reshape(-1))
model = lindblad.LindbladModel(lindblad.spontaneous_decay_gamma())
a = lindblad.bound_trajectory(lindblad.evolve(psi, model, 2.0, 1e-2, every=50), (1, 2), (1, 2))
b = lindblad.bound_trajectory(lindblad.evolve(phi, model, 2.0, 1e-2, every=50), (1, 2), (1, 2))
print("ratio:", a.series["raw"][1:3] / b.series["raw"][1:3], "expected", 9 * w[1] * w[2])
