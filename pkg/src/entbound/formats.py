"""JSON state/channel files, JSON reports and CSV trajectories.

Complex numbers are stored as ``[re, im]`` pairs; matrices as row-major lists
of rows. Non-finite numbers are rejected on load.
"""

import io
import json
import math

import numpy as np

from .channels import KrausChannel
from .errors import EntboundError
from .states import DensityOperator, PureBipartiteState


class ParseError(EntboundError, ValueError):
    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


def _reject_constant(name):
    raise ParseError("<json>", f"non-finite number {name} is not allowed")


def loads(text):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError("<json>", str(exc)) from None


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dumps(obj):
    # float repr is the shortest string that round-trips exactly
    return json.dumps(obj, indent=2, allow_nan=False)


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(field, f"expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ParseError(field, "non-finite number")
    return float(value)


def _complex(value, field):
    if not isinstance(value, list) or len(value) != 2:
        raise ParseError(field, f"expected [re, im], got {value!r}")
    return complex(_number(value[0], field), _number(value[1], field))


def _count(doc, field):
    if field not in doc:
        raise ParseError(field, "missing")
    value = doc[field]
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ParseError(field, f"expected a positive integer, got {value!r}")
    return value


def parse_matrix(rows, field, shape=None):
    if not isinstance(rows, list) or not rows:
        raise ParseError(field, "expected a non-empty list of rows")
    parsed = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ParseError(f"{field}[{i}]", "expected a list")
        parsed.append([_complex(x, f"{field}[{i}][{j}]") for j, x in enumerate(row)])
    if len({len(r) for r in parsed}) != 1:
        raise ParseError(field, "rows have unequal lengths")
    m = np.array(parsed, dtype=np.complex128)
    if shape is not None and m.shape != shape:
        raise ParseError(field, f"expected shape {shape}, got {m.shape}")
    return m


def encode_complex(z):
    return [float(z.real), float(z.imag)]


def encode_matrix(m):
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def state_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("<root>", "expected a JSON object")
    dA, dB = _count(doc, "dimA"), _count(doc, "dimB")
    amps = doc.get("amplitudes")
    if not isinstance(amps, list):
        raise ParseError("amplitudes", "missing or not a list")
    if len(amps) != dA * dB:
        raise ParseError("amplitudes", f"expected {dA * dB} entries, got {len(amps)}")
    values = np.array([_complex(x, f"amplitudes[{i}]") for i, x in enumerate(amps)])
    psi = PureBipartiteState(dA, dB, values)
    if psi.norm2 > 1 + 1e-10 or psi.norm2 == 0:
        raise ParseError("amplitudes", f"squared norm {psi.norm2} outside (0, 1]")
    return psi


def state_to_dict(psi):
    return {"dimA": psi.dimA, "dimB": psi.dimB,
            "amplitudes": [encode_complex(z) for z in psi.amplitudes]}


def density_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("<root>", "expected a JSON object")
    dA, dB = _count(doc, "dimA"), _count(doc, "dimB")
    if "matrix" not in doc:
        raise ParseError("matrix", "missing")
    n = dA * dB
    rho = DensityOperator(dA, dB, parse_matrix(doc["matrix"], "matrix", (n, n)))
    try:
        rho.validate()
    except EntboundError as exc:
        raise ParseError("matrix", str(exc)) from None
    return rho


def density_to_dict(rho):
    return {"dimA": rho.dimA, "dimB": rho.dimB, "matrix": encode_matrix(rho.matrix)}


def state_or_density_from_dict(doc):
    if isinstance(doc, dict) and "amplitudes" in doc:
        return state_from_dict(doc)
    return density_from_dict(doc)


def channel_from_dict(doc):
    if not isinstance(doc, dict):
        raise ParseError("<root>", "expected a JSON object")
    d_in, d_out = _count(doc, "dim_in"), _count(doc, "dim_out")
    ops = doc.get("kraus")
    if not isinstance(ops, list) or not ops:
        raise ParseError("kraus", "missing or empty")
    mats = [parse_matrix(k, f"kraus[{i}]", (d_out, d_in)) for i, k in enumerate(ops)]
    try:
        return KrausChannel(mats)
    except EntboundError as exc:
        raise ParseError("kraus", str(exc)) from None


def channel_to_dict(ch):
    return {"dim_in": ch.dim_in, "dim_out": ch.dim_out,
            "kraus": [encode_matrix(k) for k in ch.kraus]}


def gamma_from_dict(doc):
    if not isinstance(doc, dict) or "gamma" not in doc:
        raise ParseError("gamma", "missing")
    m = parse_matrix(doc["gamma"], "gamma")
    if m.shape[0] != m.shape[1]:
        raise ParseError("gamma", f"expected a square matrix, got shape {m.shape}")
    return m


TRAJECTORY_FIELDS = ("t", "raw", "clamped", "trace", "purity")


def trajectory_rows(traj):
    s = traj.series
    return zip(traj.times, s["raw"], s["clamped"], s["trace"], s["purity"])


def trajectory_csv(traj):
    buf = io.StringIO()
    buf.write(",".join(TRAJECTORY_FIELDS) + "\n")
    for row in trajectory_rows(traj):
        buf.write(",".join(f"{float(x):.12g}" for x in row) + "\n")
    return buf.getvalue()


def trajectory_json(traj):
    return dumps({name: [float(x) for x in col]
                  for name, col in zip(TRAJECTORY_FIELDS, zip(*trajectory_rows(traj)))})
