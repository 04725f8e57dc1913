"""Numpy implementations of the row-band kernels.

Expression order matches the compiled core exactly so both backends produce
bit-identical planes.
"""

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def sobel_band(padded, gx, gy, r0, r1):
    h, w = gx.shape
    p = padded
    s = slice(r0, r1)
    a, b, c = p[r0:r1, 2:w + 2], p[r0 + 1:r1 + 1, 2:w + 2], p[r0 + 2:r1 + 2, 2:w + 2]
    d, e, f = p[r0:r1, 0:w], p[r0 + 1:r1 + 1, 0:w], p[r0 + 2:r1 + 2, 0:w]
    gx[s] = (a + 2 * b + c) - (d + 2 * e + f)
    a, b, c = p[r0 + 2:r1 + 2, 0:w], p[r0 + 2:r1 + 2, 1:w + 1], p[r0 + 2:r1 + 2, 2:w + 2]
    d, e, f = p[r0:r1, 0:w], p[r0:r1, 1:w + 1], p[r0:r1, 2:w + 2]
    gy[s] = (a + 2 * b + c) - (d + 2 * e + f)


def median_band(padded, out, radius, r0, r1):
    k = 2 * radius + 1
    windows = sliding_window_view(padded, (k, k))
    out[r0:r1] = np.median(windows[r0:r1], axis=(2, 3))
