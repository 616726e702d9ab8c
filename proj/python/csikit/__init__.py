# SPDX-License-Identifier: Apache-2.0
# Copyright (C) 2026 The csikit Authors

"""Phase sanitization for OFDM channel state information.

Thin Python layer over the C++ core. Matrices are numpy arrays with one row
per OFDM symbol and one column per subcarrier.
"""

from ._core import (
    DataError,
    FormatError,
    TsfrReport,
    decode_csif,
    decompose,
    demo_spec,
    diff_histogram,
    ds_series,
    encode_csif,
    exceedance_profile,
    gap_stats,
    lrr_calibrate,
    lt_calibrate,
    method_names,
    process,
    read_csif,
    rebuild_symbol,
    recompose,
    regress_symbol,
    sg_2d,
    sg_apply,
    sg_freq,
    sg_kernel,
    sg_time,
    synthesize,
    tsfr,
    unwrap,
    wrap_to_pi,
    write_csif,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
