"""Hot bit-level kernels with a compiled backend and a pure-Python fallback.

The compiled module handles widths up to 64 bits.  Wider values, a failed
build, or ``FBSYNTH_PURE_PYTHON=1`` route everything to ``_pykernels``.
"""

import os

from . import _pykernels as py
from ._pykernels import ASHR, LSHR, SHL

native = None
if os.environ.get("FBSYNTH_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as native
    except ImportError:
        native = None

BACKEND = "cython" if native is not None else "python"

__all__ = ["SHL", "LSHR", "ASHR", "BACKEND", "ripple_carry_add", "reduce_product",
           "shift_join", "filter_members", "py", "native"]


if native is not None:
    _c_add, _c_reduce, _c_shift, _c_filter = (native.ripple_carry_add, native.reduce_product,
                                              native.shift_join, native.filter_members)
    _p_add, _p_reduce, _p_shift, _p_filter = (py.ripple_carry_add, py.reduce_product,
                                              py.shift_join, py.filter_members)

    def ripple_carry_add(w, z1, o1, z2, o2, cin_z, cin_o):
        if w <= 64:
            return _c_add(w, z1, o1, z2, o2, cin_z, cin_o)
        return _p_add(w, z1, o1, z2, o2, cin_z, cin_o)

    def reduce_product(w, z, o, slo, shi, ulo, uhi):
        if w <= 64:
            return _c_reduce(w, z, o, slo, shi, ulo, uhi)
        return _p_reduce(w, z, o, slo, shi, ulo, uhi)

    def shift_join(kind, w, z1, o1, z2, o2):
        if w <= 64:

            return _c_shift(kind, w, z1, o1, z2, o2)
        return _p_shift(kind, w, z1, o1, z2, o2)

    def filter_members(values, m, must0, must1, slo, shi, ulo, uhi, w):
        if w <= 64 and m <= 64:
            return _c_filter(values, m, must0, must1, slo, shi, ulo, uhi, w)
        return _p_filter(values, m, must0, must1, slo, shi, ulo, uhi, w)
else:
    ripple_carry_add = py.ripple_carry_add
    reduce_product = py.reduce_product
    shift_join = py.shift_join
    filter_members = py.filter_members
