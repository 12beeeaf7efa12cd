"""Backend selection for the numeric kernels.

Prefers the compiled extension when it was built, falling back to the NumPy
implementations otherwise.  ``BACKEND`` records which one is active; both can
be obtained explicitly (for parity tests and benchmarks) via
:func:`available_backends`.
"""

from ufom import _kernels_py

try:
    from ufom import _kernels as _active

    BACKEND = "compiled"
except ImportError:
    _active = _kernels_py
    BACKEND = "numpy"

dot = _active.dot
nrm2sq = _active.nrm2sq
scale_add = _active.scale_add
quad_value = _active.quad_value
quad_grad = _active.quad_grad
quad_ray_coeffs = _active.quad_ray_coeffs
maxquad_value = _active.maxquad_value
maxquad_value_subgrad = _active.maxquad_value_subgrad
shifted_max = _active.shifted_max


def available_backends():
    """Name -> module for every importable kernel backend."""
    backends = {"numpy": _kernels_py}
    if BACKEND == "compiled":
        backends["compiled"] = _active
    return backends
