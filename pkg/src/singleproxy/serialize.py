"""JSON encoding of fitted models and reports.

Floats are emitted by :mod:`json` with ``repr`` precision, so a model read
back predicts exactly what the in-memory model predicted. Keys are sorted
for byte-stable output.
"""

import hashlib
import json

import numpy as np

from .errors import DataError
from .kernels import Bandwidths
from .krr import KrrModel
from .skpv import SkpvModel
from .spmmr import SpmmrModel
from .structural import method_of

MODEL_FORMAT = "singleproxy-model"
MODEL_VERSION = 1


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _bw_dict(bw):
    return {"sigma_a": bw.sigma_a, "sigma_y": bw.sigma_y, "sigma_w": bw.sigma_w}


def model_to_dict(model, bandwidths=None, data_sha256=None, stage_indices=None):
    """Plain-dict form of a fitted model.

    ``bandwidths`` is only needed for KRR models, which keep just ``sigma_a``
    themselves; the full triple is recorded for provenance.
    """
    method = method_of(model)
    out = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "method": method,
        "alpha": model.alpha.tolist(),
        "data_sha256": data_sha256,
        "stage_indices": None,
    }
    if method == "krr":
        bw = _bw_dict(bandwidths) if bandwidths is not None else {"sigma_a": model.sigma_a}
        bw["sigma_a"] = model.sigma_a
        out["bandwidths"] = bw
        out["hyperparameters"] = {"lambda": model.lam}
        out["anchors"] = {"a": model.anchors.tolist()}
    elif method == "skpv":
        out["bandwidths"] = _bw_dict(model.bandwidths)
        out["hyperparameters"] = {"lambda": model.lam, "eta": model.eta}
        out["anchors"] = {"stage1_w": model.stage1_w.tolist(), "stage2_a": model.stage2_a.tolist()}
        out["b_matrix"] = model.b_matrix.tolist()
    else:
        out["bandwidths"] = _bw_dict(model.bandwidths)
        out["hyperparameters"] = {"eta": model.eta}
        out["anchors"] = {"a": model.anchors_a.tolist(), "w": model.anchors_w.tolist()}
    if stage_indices is not None:
        i1, i2 = stage_indices
        out["stage_indices"] = {"stage1": [int(i) for i in i1], "stage2": [int(i) for i in i2]}
    return out


def model_from_dict(obj):
    if obj.get("format") != MODEL_FORMAT:
        raise DataError("not a singleproxy model file")
    method = obj.get("method")
    try:
        alpha = np.array(obj["alpha"], dtype=float)
        bw = obj["bandwidths"]
        hp = obj["hyperparameters"]
        anchors = obj["anchors"]
        if method == "krr":
            return KrrModel(np.array(anchors["a"], dtype=float), alpha, float(bw["sigma_a"]), float(hp["lambda"]))
        bws = Bandwidths(float(bw["sigma_a"]), float(bw["sigma_y"]), float(bw["sigma_w"]))
        if method == "skpv":
            return SkpvModel(
                alpha, np.array(obj["b_matrix"], dtype=float),
                np.array(anchors["stage1_w"], dtype=float), np.array(anchors["stage2_a"], dtype=float),
                bws, float(hp["lambda"]), float(hp["eta"]),
            )
        if method == "spmmr":
            return SpmmrModel(
                alpha, np.array(anchors["a"], dtype=float), np.array(anchors["w"], dtype=float),
                bws, float(hp["eta"]),
            )
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed model file: missing or invalid {exc}") from None
    raise DataError(f"unknown model method {method!r}")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=False) + "\n"


def save_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def load_json(path):
    with open(path, encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON ({exc})") from None
