"""JSON and CSV serialization of configurations, residuals, trajectories and curves.

JSON floats are written with Python's shortest round-trip repr, so loading a
file reproduces every position bit for bit.  Vortices are stored sorted by
``(Re z, Im z)`` and dictionary keys are sorted, which makes the output
byte-stable for identical inputs.
"""
from __future__ import annotations

import csv
import io
import json
from typing import Any

import numpy as np

from .asymptotics import CurveSample
from .configuration import PERIOD, VortexConfiguration
from .dynamics import Trajectory
from .elliptic import Lattice
from .equilibrium import EquilibriumReport
from .errors import ValidationError


def complex_to_json(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": z.real + 0.0, "im": z.imag + 0.0}


def complex_from_json(d: Any) -> complex:
    if isinstance(d, dict):
        return complex(float(d["re"]), float(d["im"]))
    return complex(d)


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars, arrays and complex numbers."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(obj)
    return obj


def _periodicity(config: VortexConfiguration) -> dict:
    if config.is_strip:
        return {"type": "strip", "period": PERIOD}
    lat = config.lattice
    return {
        "type": "lattice",
        "omega1": complex_to_json(lat.omega1),
        "omega2": complex_to_json(lat.omega2),
        "eta1": complex_to_json(lat.eta1),
        "eta2": complex_to_json(lat.eta2),
        "a": complex_to_json(lat.a),
        "b": complex_to_json(lat.b),
    }


def config_to_dict(config: VortexConfiguration, report: EquilibriumReport | None = None,
                   tolerances: dict[str, float] | None = None) -> dict:
    """Schema: periodicity, vortices, velocity, alpha, residuals, provenance, tolerances.

    The configuration is sorted first; residuals (if given) are reordered to
    match, so ``report`` must belong to ``config`` in its original order.
    """
    order = np.lexsort((config.positions.imag, config.positions.real))
    out = {
        "periodicity": _periodicity(config),
        "vortices": [
            {"re": float(config.positions[i].real) + 0.0, "im": float(config.positions[i].imag) + 0.0,
             "gamma": int(config.circulations[i])}
            for i in order
        ],
        "velocity": complex_to_json(config.velocity),
        "alpha": complex_to_json(config.alpha),
        "residuals": [],
        "provenance": to_jsonable(config.provenance),
        "tolerances": to_jsonable(tolerances or {}),
    }
    if report is not None:
        if len(report) != config.n:
            raise ValidationError("io: residual report does not match the configuration")
        out["residuals"] = [complex_to_json(report.per_vortex[i]) for i in order]
        out["equation"] = report.equation_kind
        out["max_residual"] = report.max_residual
    return out


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


def config_to_json(config: VortexConfiguration, report: EquilibriumReport | None = None,
                   tolerances: dict[str, float] | None = None) -> str:
    return dumps(config_to_dict(config, report, tolerances))


def config_from_dict(data: dict) -> VortexConfiguration:
    per = data.get("periodicity", {"type": "strip"})
    lattice = None
    if per.get("type") == "lattice":
        lattice = Lattice(complex_from_json(per["omega1"]), complex_from_json(per["omega2"]))
    elif per.get("type") != "strip":
        raise ValidationError(f"io: unknown periodicity {per.get('type')!r}")
    vort = data.get("vortices", [])
    pos = [complex(float(v["re"]), float(v["im"])) for v in vort]
    gam = [int(v["gamma"]) for v in vort]
    return VortexConfiguration(
        pos, gam,
        velocity=complex_from_json(data.get("velocity", 0)),
        alpha=complex_from_json(data.get("alpha", 0)),
        lattice=lattice,
        provenance=data.get("provenance", {}),
    )


def config_from_json(text: str) -> VortexConfiguration:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"io: invalid JSON: {exc}") from exc
    return config_from_dict(data)


# -- CSV ----------------------------------------------------------------------

def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def trajectory_to_csv(traj: Trajectory) -> str:
    """Columns ``t, re_1, im_1, re_2, im_2, ...`` (1-based vortex index)."""
    n = traj.states.shape[1]
    header = ["t"] + [f"{part}_{j}" for j in range(1, n + 1) for part in ("re", "im")]
    rows = []
    for t, state in zip(traj.times, traj.states):
        row = [float(t)]
        for z in state:
            row += [float(z.real), float(z.imag)]
        rows.append(row)
    return _csv(rows, header)


def trajectory_from_csv(text: str) -> tuple[np.ndarray, np.ndarray]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if not header or header[0] != "t":
        raise ValidationError("io: trajectory CSV must start with a header row beginning with 't'")
    data = np.array([[float(x) for x in row] for row in reader if row])
    if data.size == 0:
        return np.zeros(0), np.zeros((0, (len(header) - 1) // 2), dtype=complex)
    return data[:, 0], data[:, 1::2] + 1j * data[:, 2::2]


def residuals_to_csv(config: VortexConfiguration, report: EquilibriumReport) -> str:
    rows = [[j + 1, float(config.positions[j].real), float(config.positions[j].imag), int(config.circulations[j]),
             float(r.real), float(r.imag), float(abs(r))]
            for j, r in enumerate(report.per_vortex)]
    return _csv(rows, ["index", "re", "im", "gamma", "res_re", "res_im", "res_abs"])


def curve_to_csv(sample: CurveSample) -> str:
    rows = [[float(x), float(yp), float(ym), int(bool(d))]
            for x, yp, ym, d in zip(sample.x, sample.y_plus, sample.y_minus, sample.dips)]
    return _csv(rows, ["x", "y_plus", "y_minus", "dips"])


def curve_from_csv(text: str) -> CurveSample:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if header[:3] != ["x", "y_plus", "y_minus"]:
        raise ValidationError("io: curve CSV needs columns x, y_plus, y_minus")
    rows = [row for row in reader if row]
    arr = np.array([[float(v) for v in row[:3]] for row in rows]).reshape(-1, 3)
    dips = np.array([bool(int(row[3])) if len(row) > 3 else False for row in rows])
    return CurveSample(arr[:, 0], arr[:, 1], arr[:, 2], dips)


def field_to_csv(points: np.ndarray, velocity: np.ndarray, flags: np.ndarray) -> str:
    rows = [[float(z.real), float(z.imag), float(w.real), float(w.imag), int(bool(f))]
            for z, w, f in zip(np.ravel(points), np.ravel(velocity), np.ravel(flags))]
    return _csv(rows, ["x", "y", "u", "v", "near_singular"])

