"""Numerical checks of the factorization laws for concurrence and its bounds.

Every law compares a bound evaluated on ``(1 (x) S)|psi><psi|`` with the
same bound on ``(1 (x) S)|phi+><phi+|``, where ``phi+`` is the maximally
entangled state written in the Schmidt bases of ``psi``. Both operators are
left unnormalized; the functionals are homogeneous, so the trace factors
``p``, ``p''`` never appear explicitly. Pair indices refer to the Schmidt
basis of ``psi``.

Each ``verify_*`` function checks one instance and returns a one-trial
:class:`VerificationReport`; :func:`run_law` draws seeded random instances
and merges their reports.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import bounds, channels
from .bounds import LocalBasisPair, all_pairs, make_pair
from .channels import apply, choi_state
from .errors import ContractError, DimensionError, DomainError
from .states import (PureBipartiteState, computational_schmidt, maximally_entangled,
                     random_pure, random_schmidt_weights, schmidt_decompose,
                     state_from_schmidt)

CONVENTION = "unnormalized post-channel operators; homogeneous bound functionals"

EQUALITY_LAWS = {"EQ10": 1e-8, "EQ15": 1e-9, "EQ16": 1e-9, "EQ17-EQUALITY": 1e-8}
INEQUALITY_LAWS = {"EQ11": 1e-9, "EQ12": 1e-9, "EQ17": 1e-9}
LAWS = tuple(EQUALITY_LAWS) + tuple(INEQUALITY_LAWS)
SCAN_ID = "EQ133-SCAN"
SCAN_TOL = 1e-9
MIN_INVERTIBLE_WEIGHT = 1e-3
KEEP_WORST = 5


@dataclass(frozen=True)
class WorstCase:
    seed: object
    dims: str
    value: float


@dataclass
class VerificationReport:
    law_id: str
    kind: str
    tolerance: float
    trials: int = 0
    max_abs_residual: float = 0.0
    min_slack: float = math.inf
    violations: int = 0
    worst: list = field(default_factory=list)

    @property
    def passed(self):
        if self.kind == "equality":
            return self.max_abs_residual < self.tolerance
        if self.kind == "inequality":
            return self.min_slack > -self.tolerance
        return True

    @property
    def status(self):
        if self.kind == "scan":
            return "CONFIRMS-PAPER" if self.violations else "INCONCLUSIVE"
        return "PASS" if self.passed else "FAIL"

    def _worst_key(self, case):
        # equality: largest residual first; inequality and scan: smallest slack first
        primary = -case.value if self.kind == "equality" else case.value
        return (primary, str(case.seed))

    def merge(self, other):
        if (other.law_id, other.kind) != (self.law_id, self.kind):
            raise ValueError("cannot merge reports of different laws")
        worst = sorted(self.worst + other.worst, key=self._worst_key)[:KEEP_WORST]
        return VerificationReport(
            self.law_id, self.kind, self.tolerance,
            trials=self.trials + other.trials,
            max_abs_residual=max(self.max_abs_residual, other.max_abs_residual),
            min_slack=min(self.min_slack, other.min_slack),
            violations=self.violations + other.violations,
            worst=worst,
        )

    def to_dict(self):
        return {
            "law_id": self.law_id,
            "trials": self.trials,
            "max_abs_residual": self.max_abs_residual,
            "min_slack": None if math.isinf(self.min_slack) else self.min_slack,
            "violations": self.violations,
            "worst": [{"seed": w.seed, "dims": w.dims, "value": w.value} for w in self.worst],
            "status": self.status,
            "tolerance": self.tolerance,
            "convention": CONVENTION,
        }


def empty_report(law_id):
    if law_id == SCAN_ID:
        return VerificationReport(law_id, "scan", SCAN_TOL)
    if law_id in EQUALITY_LAWS:
        return VerificationReport(law_id, "equality", EQUALITY_LAWS[law_id])
    if law_id in INEQUALITY_LAWS:
        return VerificationReport(law_id, "inequality", INEQUALITY_LAWS[law_id])
    raise DomainError(f"unknown law {law_id!r}")


def _single(law_id, lhs, rhs, inst):
    """One-trial report from the two sides of a law."""
    report = empty_report(law_id)
    residual = float(abs(lhs - rhs))
    slack = float(rhs - lhs)
    if report.kind == "equality":
        bad = residual >= report.tolerance
        value = residual
    else:
        bad = slack < -report.tolerance
        value = slack
    report.trials = 1
    report.max_abs_residual = residual
    report.min_slack = slack
    report.violations = int(bad)
    report.worst = [WorstCase(inst.seed, inst.dims_label, value)]
    return report


@dataclass
class FactorizationInstance:
    psi: PureBipartiteState
    channel: channels.KrausChannel
    pairA: bounds.PairIndex
    pairB: bounds.PairIndex
    schmidt: object = None
    basis: LocalBasisPair = None
    seed: object = None

    def __post_init__(self):
        if self.schmidt is None:
            self.schmidt = schmidt_decompose(self.psi)
        if self.basis is None:
            self.basis = LocalBasisPair.from_schmidt(self.schmidt)
        self.pairA = make_pair(self.pairA, dim=self.psi.dimA)
        self.pairB = make_pair(self.pairB, dim=self.psi.dimB)

    @property
    def d(self):
        return min(self.psi.dimA, self.psi.dimB)

    @property
    def dims_label(self):
        return f"{self.psi.dimA}x{self.psi.dimB}"

    def require_schmidt_basis(self):
        if self.basis.tag != "schmidt":
            raise ContractError(f"factorization laws need the Schmidt basis of psi, got {self.basis.tag!r}")

    def outputs(self, side="B"):
        """Unnormalized ``(1 (x) S)|psi><psi|`` and ``(1 (x) S)|phi+><phi+|``."""
        out = apply(self.psi, self.channel, side).output
        choi = choi_state(self.channel, self.schmidt, side).output
        return out, choi


def _require_single_kraus(inst):
    if len(inst.channel.kraus) != 1:
        raise DomainError(f"law needs a single Kraus operator, channel has {len(inst.channel.kraus)}")


def mlb_sides(inst, k=1):
    """Both sides of the MLB squared factorization for witness ``V_(k)``.

    ``k = 1`` sends side B through the channel and takes the weight factor
    from the A pair; ``k = 2`` is the mirror image.
    """
    inst.require_schmidt_basis()
    side = "B" if k == 1 else "A"
    out, choi = inst.outputs(side)
    basis, pA, pB = inst.basis, inst.pairA, inst.pairB
    lhs = bounds.mlb_squared(out, k, pA, pB, basis).raw
    weight_pair = pA if k == 1 else pB
    psi_factor = bounds.mlb_squared(inst.psi, k, weight_pair, weight_pair, basis).raw
    rhs = inst.d**2 / 4 * bounds.mlb_squared(choi, k, pA, pB, basis).raw * psi_factor
    return lhs, rhs


def _mirror_available(inst):
    dA, dB = inst.psi.dims
    return inst.channel.dim_in == dA and inst.channel.dim_out == dA and inst.pairB.hi < dA


def verify_mlb_factorization(inst):
    """Witness ``V_(1)`` with the channel on B, plus the ``V_(2)`` mirror on A when dims allow."""
    sides = [mlb_sides(inst, 1)]
    if _mirror_available(inst):
        sides.append(mlb_sides(inst, 2))
    lhs, rhs = max(sides, key=lambda s: abs(s[0] - s[1]))
    return _single("EQ15", lhs, rhs, inst)


def alb_sides(inst):
    inst.require_schmidt_basis()
    out, choi = inst.outputs()
    basis, pA, pB = inst.basis, inst.pairA, inst.pairB
    lhs = bounds.alb(out, pA, pB, basis).raw
    psi_factor = bounds.alb(inst.psi, pA, pA, basis).raw
    rhs = inst.d / 2 * psi_factor * bounds.alb(choi, pA, pB, basis).raw
    return lhs, rhs


def verify_alb_pure(inst):
    _require_single_kraus(inst)
    return _single("EQ16", *alb_sides(inst), inst)


def verify_alb_inequality(inst):
    return _single("EQ17", *alb_sides(inst), inst)


def verify_alb_equality_invertible(inst, min_weight=MIN_INVERTIBLE_WEIGHT):
    if inst.schmidt.weights.min() < min_weight:
        raise DomainError(f"Schmidt weights {inst.schmidt.weights} fall below {min_weight}")
    return _single("EQ17-EQUALITY", *alb_sides(inst), inst)


def verify_qubit_factorization(inst):
    if inst.psi.dims != (2, 2):
        raise DimensionError(f"two-qubit law needs 2x2 dims, got {inst.dims_label}")
    out, choi = inst.outputs()
    lhs = bounds.wootters_concurrence(out)
    rhs = bounds.wootters_concurrence(choi) * bounds.wootters_concurrence(inst.psi)
    return _single("EQ10", lhs, rhs, inst)


def concurrence_upper_sides(inst):
    _require_single_kraus(inst)
    (K,) = inst.channel.kraus
    dA, dB = inst.psi.dims
    lift = np.kron(np.eye(dA), K)
    out = PureBipartiteState(dA, K.shape[0], lift @ inst.psi.amplitudes)
    phi = maximally_entangled(inst.schmidt)
    choi = PureBipartiteState(dA, K.shape[0], lift @ phi.amplitudes)
    lhs = bounds.concurrence_pure(out)
    rhs = dB / 2 * bounds.concurrence_pure(choi) * bounds.concurrence_pure(inst.psi)
    return lhs, rhs


def verify_concurrence_upper(inst):
    return _single("EQ11", *concurrence_upper_sides(inst), inst)


def verify_tau_upper(inst):
    dA, dB = inst.psi.dims
    if dA != dB:
        raise DimensionError(f"tau law needs d x d dims, got {inst.dims_label}")
    inst.require_schmidt_basis()
    out, choi = inst.outputs()
    lhs = bounds.tau(out, inst.basis)
    rhs = inst.d**2 / 4 * bounds.tau(choi, inst.basis) * bounds.concurrence_pure(inst.psi) ** 2
    return _single("EQ12", lhs, rhs, inst)


VERIFIERS = {
    "EQ10": verify_qubit_factorization,
    "EQ11": verify_concurrence_upper,
    "EQ12": verify_tau_upper,
    "EQ15": verify_mlb_factorization,
    "EQ16": verify_alb_pure,
    "EQ17": verify_alb_inequality,
    "EQ17-EQUALITY": verify_alb_equality_invertible,
}


# -- random instances -------------------------------------------------------

def trial_seed(master_seed, index):
    """Per-trial seed split off the master seed by trial index."""
    return int(np.random.SeedSequence([master_seed, index]).generate_state(1, np.uint64)[0])


def parse_dims(dims):
    if isinstance(dims, str):
        parts = dims.lower().split("x")
        if len(parts) != 2:
            raise DomainError(f"dims must look like '3x3', got {dims!r}")
        dims = tuple(int(p) for p in parts)
    dA, dB = (int(x) for x in dims)
    if dA < 2 or dB < 2:
        raise DomainError(f"both dimensions must be >= 2, got {dA}x{dB}")
    return dA, dB


def _random_pair(rng, dim):
    pairs = all_pairs(dim)
    return pairs[rng.integers(len(pairs))]


def _psi_with_weights(rng, dA, dB, weights):
    return state_from_schmidt(weights, dA, dB, rng)


def _deficient_weights(rng, d):
    """Schmidt weights with at least one zero entry (non-invertible filter)."""
    rank = int(rng.integers(1, d)) if d > 2 else 1
    w = np.zeros(d)
    w[:rank] = random_schmidt_weights(rank, rng)
    return w


def _random_cptp(rng, dim, max_kraus=4, min_kraus=1):
    return channels.random_channel(dim, int(rng.integers(min_kraus, max_kraus + 1)), rng)


def make_instance(law_id, dims, seed, family=None, channel=None):
    """Random instance for ``law_id`` drawn deterministically from ``seed``.

    ``family`` chooses the channel family (``"cptp"``, ``"filter"`` or
    ``"mixed"``); each law has a default. A fixed ``channel`` overrides it.
    """
    dA, dB = parse_dims(dims)
    d = min(dA, dB)
    rng = np.random.default_rng(seed)
    if law_id == "EQ17-EQUALITY":
        psi = _psi_with_weights(rng, dA, dB, random_schmidt_weights(d, rng, MIN_INVERTIBLE_WEIGHT))
    elif law_id == "EQ17" and rng.random() < 1 / 3:
        psi = _psi_with_weights(rng, dA, dB, _deficient_weights(rng, d))
    else:
        psi = random_pure(dA, dB, rng)
    if channel is None:
        if family is None:
            family = {"EQ15": "mixed", "EQ16": "filter", "EQ11": "filter"}.get(law_id, "cptp")
        if family == "mixed":
            family = "filter" if rng.random() < 0.5 else "cptp"
        if family == "filter":
            channel = channels.random_filter(dB, rng)
        elif family == "cptp":
            min_kraus = 2 if law_id == "EQ17" else 1
            channel = _random_cptp(rng, dB, min_kraus=min_kraus)
        else:
            raise DomainError(f"unknown channel family {family!r}")
    elif channel.dim_in != dB:
        raise DimensionError(f"channel takes dimension {channel.dim_in}, B side has {dB}")
    pairA = _random_pair(rng, d)
    pairB = _random_pair(rng, dB)
    return FactorizationInstance(psi, channel, pairA, pairB, seed=seed)


def run_law(law_id, dims, trials, seed, family=None, channel=None):
    if law_id not in VERIFIERS:
        raise DomainError(f"unknown law {law_id!r}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    verifier = VERIFIERS[law_id]
    report = empty_report(law_id)
    for i in range(trials):
        inst = make_instance(law_id, dims, trial_seed(seed, i), family, channel)
        report = report.merge(verifier(inst))
    return report


# -- refuted relations ------------------------------------------------------

def _alb_table(rho, basis):
    """``ALB_{ij,mn}`` for every pair on each side, indexed ``[pairA, pairB]``."""
    rho = bounds.as_density(rho)
    ensemble = bounds.eigen_ensemble(rho)
    pa, pb = all_pairs(rho.dimA), all_pairs(rho.dimB)
    table = np.zeros((len(pa), len(pb)))
    for x, p in enumerate(pa):
        for y, q in enumerate(pb):
            table[x, y] = bounds.alb_from_ensemble(ensemble, bounds.chi_vector(p, q, basis), rho.dims)
    return table


def refuted_relation_terms(psi, channel, basis="schmidt"):
    """Both sides of the tau lower-bound relation and the pairwise ALB identity.

    Returns ``(tau_lhs, tau_rhs, pair_residuals)`` where the tau relation
    claims ``tau_lhs >= tau_rhs`` and ``pair_residuals`` holds
    ``|lhs - rhs|`` of the per-pair squared identity for every pair choice.
    """
    dA, dB = psi.dims
    if dA != dB:
        raise DimensionError("the refuted relations are stated for d x d systems")
    d = dA
    schmidt = schmidt_decompose(psi)
    if basis == "schmidt":
        local = LocalBasisPair.from_schmidt(schmidt)
        reference = schmidt
    elif basis == "computational":
        local = LocalBasisPair.computational(d, d)
        reference = computational_schmidt(d, d)
    else:
        raise DomainError(f"unknown basis {basis!r}")
    out = apply(psi, channel).output
    choi = choi_state(channel, reference).output

    alb_out = _alb_table(out, local)
    alb_choi = _alb_table(choi, local)
    alb_psi = _alb_table(psi, local)

    w = schmidt.weights
    products = [w[p] * w[r] for p, r in all_pairs(d) if w[p] * w[r] > 1e-14]
    eta = min(products) if products else 0.0
    c2 = bounds.concurrence_pure(psi) ** 2
    tau_lhs = float((alb_out**2).sum())
    tau_rhs = 2 * d * eta / (d - 1) * d**2 / 4 * float((alb_choi**2).sum()) * c2

    # C_{ij,kl}(psi) C_{kl,mn}(choi) summed over the middle pair
    pair_rhs = d**2 / 4 * (alb_psi @ alb_choi) ** 2
    residuals = np.abs(alb_out**2 - pair_rhs)
    return tau_lhs, tau_rhs, residuals


def scan_instance(dims, seed):
    """Random ``(psi, channel)`` for the scan; half the draws have Schmidt rank < d."""
    dA, dB = parse_dims(dims)
    d = min(dA, dB)
    rng = np.random.default_rng(seed)
    if d > 2 and rng.random() < 0.5:
        psi = _psi_with_weights(rng, dA, dB, _deficient_weights(rng, d))
    else:
        psi = random_pure(dA, dB, rng)
    return psi, _random_cptp(rng, dB)


def scan_trial(dims, seed, basis="schmidt"):
    psi, channel = scan_instance(dims, seed)
    tau_lhs, tau_rhs, residuals = refuted_relation_terms(psi, channel, basis)
    report = empty_report(SCAN_ID)
    slack = float(tau_lhs - tau_rhs)
    report.trials = 1
    report.max_abs_residual = float(residuals.max())
    report.min_slack = slack
    report.violations = int(slack < -SCAN_TOL)
    report.worst = [WorstCase(seed, f"{psi.dimA}x{psi.dimB}", slack)]
    return report


def scan_refuted_relations(dims, trials, seed, basis="schmidt"):
    """Random search for violations of the tau lower-bound relation.

    The report's ``violations`` counts instances with
    ``tau_lhs - tau_rhs < -1e-9``; ``max_abs_residual`` is the largest
    per-pair residual of the squared ALB identity seen during the scan.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    report = empty_report(SCAN_ID)
    for i in range(trials):
        report = report.merge(scan_trial(dims, trial_seed(seed, i), basis))
    return report
