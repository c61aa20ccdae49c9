"""Bilateral phase correlation optical flow.

Images are float64 arrays of shape (H, W) in [0, 255]. Flow fields are
(H, W, 2) arrays holding (dx, dy); NaN marks an invalid vector. A flow
vector is the forward displacement of a frame-1 pixel, so
frame2(p + d) ~= frame1(p).
"""

from ._core import (
    ConfigError,
    DegenerateInputError,
    DimensionError,
    Error,
    FormatError,
    IoError,
    LengthError,
    ParseError,
    SpecError,
    UnsupportedFormatError,
    angular_error,
    bilateral_filter,
    blpc_estimate,
    dense_flow,
    endpoint_error,
    estimate_flow,
    flow_to_color,
    fourier_shift,
    motion_compensate,
    mse,
    nrms,
    pc_estimate,
    phase_correlation,
    psnr,
    read_flo,
    read_image,
    standard_suite,
    value_noise,
    write_flo,
    write_image,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
