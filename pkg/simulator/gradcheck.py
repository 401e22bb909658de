import numpy as np


def numerical_gradient(fn, value, h=1e-5):
    """
    Central finite-difference gradient of a scalar function.

    :param fn: Zero-argument callable returning a float; reads ``value.data``.
    :param value: Value whose entries are perturbed in place (and restored).
    :param h: Step size.
    :return: Array shaped like ``value``.
    """
    grad = np.zeros_like(value.data)
    flat = value.data.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.size):
        original = flat[i]
        flat[i] = original + h
        plus = fn()
        flat[i] = original - h
        minus = fn()
        flat[i] = original
        out[i] = (plus - minus) / (2.0 * h)
    return grad


def relative_error(analytic, numeric, floor=1e-6):
    """Norm of the difference over the summed norms, with an absolute floor."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), floor)
    return float(np.linalg.norm(analytic - numeric) / denom)


def check_gradients(fn, values, analytic, h=1e-5):
    """
    Relative error per value between analytic and numerical gradients.

    :param fn: Zero-argument callable returning the scalar loss as a float.
    :param values: Mapping name -> Value to perturb.
    :param analytic: Mapping name -> analytic gradient array.
    :return: Mapping name -> relative error.
    """
    return {name: relative_error(analytic[name], numerical_gradient(fn, value, h))
            for name, value in values.items()}
