"""Core data containers, standardization, and CSV ingestion/emission.

A :class:`Dataset` holds the response ``y``, the scalar smoothing covariate
``t``, and the design matrix ``x``. All containers are float64, finite, and
immutable after construction; zero-variance design columns are rejected at
standardization time, not silently scaled.

CSV files use a header row, UTF-8, ``.`` as the decimal separator, and no
missing-value sentinel. Values are emitted with 17 significant digits so a
save/load round trip is bit-exact.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DegenerateColumnError, DimensionError, IngestionError, SchemaError
from .validation import as_1d_float, as_2d_float

__all__ = [
    "Dataset",
    "StandardizationInfo",
    "CoefficientVector",
    "load_csv",
    "save_csv",
    "standardize",
    "unstandardize_coefficients",
]


@dataclass(frozen=True)
class Dataset:
    """An (y, t, X) sample of n observations and p predictors."""

    y: np.ndarray
    t: np.ndarray
    x: np.ndarray
    column_names: tuple[str, ...]

    def __post_init__(self):
        y = as_1d_float(self.y, "y")
        t = as_1d_float(self.t, "t")
        x = as_2d_float(self.x, "x")
        n = y.shape[0]
        if n < 2:
            raise DimensionError(f"need at least 2 observations, got {n}")
        if x.shape[1] < 1:
            raise DimensionError("need at least 1 predictor column")
        if t.shape[0] != n or x.shape[0] != n:
            raise DimensionError(
                f"row counts disagree: y has {n}, t has {t.shape[0]}, x has {x.shape[0]}"
            )
        names = tuple(str(c) for c in self.column_names)
        if len(names) != x.shape[1]:
            raise DimensionError(
                f"{len(names)} column names for {x.shape[1]} design columns"
            )
        y.flags.writeable = False
        t.flags.writeable = False
        x.flags.writeable = False
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "column_names", names)

    @property
    def n(self) -> int:
        return self.y.shape[0]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def take(self, rows) -> "Dataset":
        """Row subset as a new Dataset (used by cross-validation)."""
        rows = np.asarray(rows)
        return Dataset(self.y[rows], self.t[rows], self.x[rows], self.column_names)


@dataclass(frozen=True)
class StandardizationInfo:
    """Centering/scaling metadata needed to undo :func:`standardize`."""

    y_mean: float
    x_means: np.ndarray
    x_scales: np.ndarray
    applied: bool = True


@dataclass(frozen=True)
class CoefficientVector:
    """A coefficient vector with its design column names."""

    values: np.ndarray
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = as_1d_float(self.values, "coefficients")
        names = tuple(self.names) if self.names else tuple(f"x{j + 1}" for j in range(len(values)))
        if len(names) != len(values):
            raise DimensionError(f"{len(names)} names for {len(values)} coefficients")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "names", names)

    def __len__(self):
        return len(self.values)


def _parse_cell(text, row, column):
    token = text.strip()
    if token == "":
        raise IngestionError(
            f"empty cell at row {row}, column {column!r} (no missing-value sentinel accepted)",
            row=row,
            column=column,
        )
    try:
        value = float(token)
    except ValueError:
        raise IngestionError(
            f"unparseable value {token!r} at row {row}, column {column!r}",
            row=row,
            column=column,
        ) from None
    if not np.isfinite(value):
        raise IngestionError(
            f"non-finite value {token!r} at row {row}, column {column!r}",
            row=row,
            column=column,
        )
    return value


def load_csv(path, response, covariate, predictors=None) -> Dataset:
    """Load a Dataset from a headered CSV file.

    Parameters
    ----------
    path : path-like
        CSV file with a header row.
    response : str
        Name of the response column.
    covariate : str
        Name of the scalar smoothing-covariate column.
    predictors : sequence of str, optional
        Predictor column names, in the desired design order. Defaults to every
        remaining column in file order.

    Raises
    ------
    SchemaError
        If a named column is missing or the schema is degenerate.
    IngestionError
        If a cell is empty, unparseable, or non-finite; the error names the
        1-based data row and the column.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: file is empty, expected a header row") from None
        header = [h.strip() for h in header]
        if response == covariate:
            raise SchemaError("response and covariate must be distinct columns")
        for name in (response, covariate):
            if name not in header:
                raise SchemaError(f"{path}: column {name!r} not found in header {header}")
        if predictors is None:
            predictors = [c for c in header if c not in (response, covariate)]
        else:
            predictors = list(predictors)
            for name in predictors:
                if name not in header:
                    raise SchemaError(f"{path}: predictor column {name!r} not found")
                if name in (response, covariate):
                    raise SchemaError(f"{path}: column {name!r} has two roles")
        if not predictors:
            raise SchemaError(f"{path}: schema names no predictor columns")

        index = {name: header.index(name) for name in [response, covariate, *predictors]}
        rows = []
        for r, record in enumerate(reader, start=1):
            if len(record) != len(header):
                raise IngestionError(
                    f"{path}: row {r} has {len(record)} cells, header has {len(header)}", row=r
                )
            rows.append(
                [_parse_cell(record[index[name]], r, name) for name in [response, covariate, *predictors]]
            )
    if len(rows) < 2:
        raise IngestionError(f"{path}: need at least 2 data rows, got {len(rows)}")
    table = np.asarray(rows, dtype=np.float64)
    return Dataset(table[:, 0], table[:, 1], table[:, 2:], tuple(predictors))


def save_csv(dataset, path, response="y", covariate="t"):
    """Write a Dataset to CSV with 17-significant-digit values (round-trip exact)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([response, covariate, *dataset.column_names])
        for i in range(dataset.n):
            writer.writerow(
                [format(v, ".17g") for v in (dataset.y[i], dataset.t[i], *dataset.x[i])]
            )


def standardize(dataset) -> tuple[Dataset, StandardizationInfo]:
    """Center the response and standardize each design column to unit sample sd.

    Sample standard deviation uses divisor n-1. The covariate ``t`` is left
    untouched (it only enters through kernel windows). The input Dataset is
    not modified.

    Raises
    ------
    DegenerateColumnError
        If a design column has zero sample variance, naming the column.
    """
    x = dataset.x
    scales = np.std(x, axis=0, ddof=1)
    dead = np.flatnonzero(scales == 0.0)
    if dead.size:
        raise DegenerateColumnError(
            f"zero-variance design column {dataset.column_names[dead[0]]!r} cannot be standardized"
        )
    y_mean = float(np.mean(dataset.y))
    x_means = np.mean(x, axis=0)
    out = Dataset(
        dataset.y - y_mean,
        dataset.t,
        (x - x_means) / scales,
        dataset.column_names,
    )
    x_means.flags.writeable = False
    scales.flags.writeable = False
    return out, StandardizationInfo(y_mean=y_mean, x_means=x_means, x_scales=scales)


def unstandardize_coefficients(beta, info) -> tuple[CoefficientVector, float]:
    """Map coefficients fit on standardized data back to the original scale.

    Returns the rescaled coefficients and the intercept-like offset
    ``y_mean - sum_j beta_orig[j] * x_means[j]``.
    """
    if not info.applied:
        raise ValueError("StandardizationInfo.applied is false; nothing to undo")
    if len(beta.values) != len(info.x_scales):
        raise DimensionError(
            f"{len(beta.values)} coefficients but {len(info.x_scales)} standardized columns"
        )
    values = beta.values / info.x_scales
    offset = info.y_mean - float(values @ info.x_means)
    return CoefficientVector(values, beta.names), offset
