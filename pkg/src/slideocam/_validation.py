"""Input validation helpers shared by the functional API and the estimator."""
import numbers

import numpy as np

from .errors import DomainError, ValidationError


def check_scalar(value, name, *, kind=float, min_val=None, max_val=None,
                 include_min=True, include_max=True):
    """Validate a scalar parameter and return it coerced to ``kind``.

    Booleans are rejected for numeric fields even though they are ints.
    """
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ValidationError(name, f"expected a number, got {value!r}")
    if kind is int:
        if isinstance(value, numbers.Integral):
            value = int(value)
        elif float(value).is_integer():
            value = int(value)
        else:
            raise ValidationError(name, f"expected an integer, got {value!r}")
    else:
        value = float(value)
        if not np.isfinite(value):
            raise ValidationError(name, f"must be finite, got {value!r}")
    if min_val is not None:
        if value < min_val or (value == min_val and not include_min):
            op = ">=" if include_min else ">"
            raise ValidationError(name, f"must be {op} {min_val}, got {value!r}")
    if max_val is not None:
        if value > max_val or (value == max_val and not include_max):
            op = "<=" if include_max else "<"
            raise ValidationError(name, f"must be {op} {max_val}, got {value!r}")
    return value


def check_angles(psi, name="psi"):
    """Return ``psi`` as a finite float array (0-d for scalars)."""
    arr = np.asarray(psi, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def check_samples(samples, minimum, name="samples"):
    return check_scalar(samples, name, kind=int, min_val=minimum)


def as_column(X, name="X"):
    """Flatten estimator input ``X`` of shape (k,) or (k, 1) to (k,)."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValidationError(name, f"expected shape (k,) or (k, 1), got {arr.shape}")
    if arr.size == 0:
        raise ValidationError(name, "empty input")
    return check_angles(arr, name)
