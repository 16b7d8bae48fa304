# %% How entanglement passes through a one-sided channel
from entbound import channels, factorization, states

# %% The channel factor is evaluated on a maximally entangled input
psi = states.random_pure(3, 3, seed=4)
ch = channels.random_channel(3, 2, seed=9)
inst = factorization.FactorizationInstance(psi, ch, (0, 2), (1, 2))
lhs, rhs = factorization.mlb_sides(inst)
print(f"MLB^2 after channel: {lhs:.12f}")
print(f"channel factor * input factor: {rhs:.12f}")

# %% Filters lose norm; the unnormalized outputs keep the law exact
flt = channels.single_filter([[1, 0, 0], [0, 0.7, 0], [0, 0, 0.2]])
print("success probability", channels.apply(psi, flt).p)
print(factorization.verify_alb_pure(
    factorization.FactorizationInstance(psi, flt, (0, 1), (0, 1))).to_dict()["max_abs_residual"])

# %% Random suites, reproducible from one master seed
for law in ("EQ15", "EQ16", "EQ17", "EQ11", "EQ12"):
    rep = factorization.run_law(law, "3x3", 50, seed=2024)
    print(f"{law:14s} {rep.status:5s} residual={rep.max_abs_residual:.1e} slack={rep.min_slack:.1e}")

# %% A relation that does not hold in general: the scan finds counterexamples
scan = factorization.scan_refuted_relations("3x3", 50, seed=1)
print(scan.status, "violations:", scan.violations, "worst slack:", scan.worst[0].value)
