"""Small argument checks shared by the model types and estimators."""

import math

from .exceptions import ModelDomainError


def check_finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ModelDomainError(f"{name} must be finite, got {value!r}", name)
    return value


def check_positive(name, value):
    value = check_finite(name, value)
    if value <= 0.0:
        raise ModelDomainError(f"{name} must be > 0, got {value!r}", name)
    return value


def check_nonnegative(name, value):
    value = check_finite(name, value)
    if value < 0.0:
        raise ModelDomainError(f"{name} must be >= 0, got {value!r}", name)
    return value


def check_interval(name, value, low, high, *, closed_low=True, closed_high=True):
    """Check ``low <= value <= high`` with optionally open ends."""
    value = check_finite(name, value)
    below = value < low if closed_low else value <= low
    above = value > high if closed_high else value >= high
    if below or above:
        lb = "[" if closed_low else "("
        rb = "]" if closed_high else ")"
        raise ModelDomainError(f"{name} must lie in {lb}{low}, {high}{rb}, got {value!r}", name)
    return value
