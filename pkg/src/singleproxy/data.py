"""Observation containers and CSV input/output.

Stage-1 files carry columns ``a`` (or ``a0 .. a{d-1}``), ``y`` and ``w`` (or
``w0 .. w{d-1}``); stage-2 files carry only the treatment and outcome
columns. Any other column is ignored on load.
"""

import csv
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .kernels import as_points

STAGE1 = "stage1"
STAGE2 = "stage2"


def _validate_pair(a, y, what):
    a = np.array(as_points(a))
    y = np.array(y, dtype=float).reshape(-1)
    if a.shape[0] != y.shape[0]:
        raise DataError(f"{what}: {a.shape[0]} treatments but {y.shape[0]} outcomes")
    if y.shape[0] == 0:
        raise DataError(f"{what}: no rows")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(y))):
        raise DataError(f"{what}: non-finite values")
    return a, y


@dataclass(frozen=True, eq=False)
class StageTwoDataset:
    """Treatment/outcome pairs used for the second-stage regression."""

    a: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        a, y = _validate_pair(self.a, self.y, "stage-2 data")
        a.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return self.y.shape[0]


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed (treatment, outcome, proxy) triples; the confounder is never stored.

    Arrays are normalised to ``a: (n, d_a)``, ``y: (n,)``, ``w: (n, d_w)`` and
    made read-only.
    """

    a: np.ndarray
    y: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        a, y = _validate_pair(self.a, self.y, "dataset")
        w = np.array(as_points(self.w))
        if w.shape[0] != y.shape[0]:
            raise DataError(f"dataset: {y.shape[0]} outcomes but {w.shape[0]} proxies")
        if not np.all(np.isfinite(w)):
            raise DataError("dataset: non-finite proxy values")
        for arr in (a, y, w):
            arr.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "w", w)

    def __len__(self):
        return self.y.shape[0]

    def stage_two(self):
        """The same rows with the proxy dropped."""
        return StageTwoDataset(self.a, self.y)

    def subset(self, idx):
        idx = np.asarray(idx)
        return Dataset(self.a[idx], self.y[idx], self.w[idx])


def _column_names(prefix, dim):
    return [prefix] if dim == 1 else [f"{prefix}{j}" for j in range(dim)]


def _find_columns(header, prefix, path):
    if prefix in header:
        return [header.index(prefix)]
    numbered = {}
    for i, name in enumerate(header):
        m = re.fullmatch(rf"{prefix}(\d+)", name)
        if m:
            numbered[int(m.group(1))] = i
    if not numbered:
        raise DataError(f"{path}: missing column '{prefix}' (header: {','.join(header)})")
    if sorted(numbered) != list(range(len(numbered))):
        raise DataError(f"{path}: columns {prefix}0..{prefix}{len(numbered) - 1} are not contiguous")
    return [numbered[j] for j in range(len(numbered))]


def load_csv(path, schema=STAGE1):
    """Read a stage-1 :class:`Dataset` or a :class:`StageTwoDataset` from CSV.

    Raises :class:`DataError` naming the line for missing columns, non-numeric
    or non-finite cells, ragged rows and empty files.
    """
    if schema not in (STAGE1, STAGE2):
        raise ValueError(f"unknown schema {schema!r}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        cols = {"a": _find_columns(header, "a", path), "y": _find_columns(header, "y", path)}
        if len(cols["y"]) != 1:
            raise DataError(f"{path}: outcome must be a single column 'y'")
        if schema == STAGE1:
            cols["w"] = _find_columns(header, "w", path)
        values = {key: [] for key in cols}
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}, line {lineno}: expected {len(header)} cells, got {len(row)}")
            for key, idx in cols.items():
                parsed = []
                for i in idx:
                    cell = row[i].strip()
                    try:
                        v = float(cell)
                    except ValueError:
                        raise DataError(
                            f"{path}, line {lineno}: non-numeric value {cell!r} in column '{header[i]}'"
                        ) from None
                    if not math.isfinite(v):
                        raise DataError(
                            f"{path}, line {lineno}: non-finite value {cell!r} in column '{header[i]}'"
                        )
                    parsed.append(v)
                values[key].append(parsed)
    if not values["y"]:
        raise DataError(f"{path}: no data rows")
    a = np.array(values["a"])
    y = np.array(values["y"])[:, 0]
    if schema == STAGE2:
        return StageTwoDataset(a, y)
    return Dataset(a, y, np.array(values["w"]))


def save_csv(data, path, u=None):
    """Write a dataset in the schema :func:`load_csv` reads.

    Floats are written with ``repr`` so a load recovers them bit for bit. An
    optional confounder column ``u`` is appended (ignored on load).
    """
    blocks = [("a", data.a), ("y", data.y[:, None])]
    if isinstance(data, Dataset):
        blocks.append(("w", data.w))
    if u is not None:
        u = np.asarray(u, dtype=float).reshape(-1, 1)
        if u.shape[0] != len(data):
            raise DataError("confounder column length does not match the data")
        blocks.append(("u", u))
    header = []
    for name, arr in blocks:
        header += ["y"] if name == "y" else ["u"] if name == "u" else _column_names(name, arr.shape[1])
    table = np.hstack([arr for _, arr in blocks])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in table:
            writer.writerow([repr(float(v)) for v in row])


def split_indices(n, fraction, seed):
    """Shuffle ``range(n)`` with ``seed`` and cut it into stage-1 / stage-2 index arrays.

    The stage-1 part gets ``round(fraction * n)`` rows. Both parts are sorted.
    """
    if not 0 < fraction < 1:
        raise ValueError(f"split fraction must lie in (0, 1), got {fraction}")
    n1 = int(round(fraction * n))
    if n1 < 2 or n - n1 < 2:
        raise ValueError(
            f"split fraction {fraction} on {n} rows leaves {n1} + {n - n1} rows; need at least 2 each"
        )
    perm = np.random.default_rng(seed).permutation(n)
    return np.sort(perm[:n1]), np.sort(perm[n1:])


def split_stages(d, fraction, seed):
    """Disjoint random split into a stage-1 dataset and a stage-2 dataset (proxy dropped)."""
    i1, i2 = split_indices(len(d), fraction, seed)
    return d.subset(i1), StageTwoDataset(d.a[i2], d.y[i2])
