"""Compiled sweep kernel for the growth engines.

One call performs one full pass: row-major pixel scan, eight neighbour
visits per pixel in the order N, NE, E, SE, S, SW, W, NW, in-place
conquests against the pixel's freshest weight.  The interior fast path
unrolls the eight visits by hand so the hot loop carries no bounds
checks; the guarded tail handles border pixels.  Every arithmetic
expression must match bgrowth.reference exactly, in the same order,
because the test suite pins bit-identical labels and weights.
"""

import numpy as np
from numba import njit

# offsets for N, NE, E, SE, S, SW, W, NW (the normative order)
OFF_I = np.array([-1, -1, 0, 1, 1, 1, 0, -1], dtype=np.int64)
OFF_J = np.array([0, 1, 1, 1, 0, -1, -1, -1], dtype=np.int64)


@njit(cache=True)
def sweep(fimg, labels, weights, inv_imax, eps, balanced):  # pragma: no cover - compiled
    rows, cols = fimg.shape
    label_changed = False
    weight_moved = False
    conquered = False
    wmin = 2.0
    wmax = -1.0
    for i in range(rows):
        row_interior = 0 < i < rows - 1
        im1 = i - 1
        ip1 = i + 1
        for j in range(cols):
            w = weights[i, j]
            if w >= 1.0:
                continue  # attacks never exceed 1; full confidence is final
            cur = fimg[i, j]
            lab = labels[i, j]
            jm1 = j - 1
            jp1 = j + 1
            if row_interior and 0 < j < cols - 1:
                # N
                wn = weights[im1, j]
                if wn > 0.0:
                    d = cur - fimg[im1, j]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[im1, j]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # NE
                wn = weights[im1, jp1]
                if wn > 0.0:
                    d = cur - fimg[im1, jp1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[im1, jp1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # E
                wn = weights[i, jp1]
                if wn > 0.0:
                    d = cur - fimg[i, jp1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[i, jp1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # SE
                wn = weights[ip1, jp1]
                if wn > 0.0:
                    d = cur - fimg[ip1, jp1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[ip1, jp1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # S
                wn = weights[ip1, j]
                if wn > 0.0:
                    d = cur - fimg[ip1, j]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[ip1, j]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # SW
                wn = weights[ip1, jm1]
                if wn > 0.0:
                    d = cur - fimg[ip1, jm1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[ip1, jm1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # W
                wn = weights[i, jm1]
                if wn > 0.0:
                    d = cur - fimg[i, jm1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[i, jm1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
                # NW
                wn = weights[im1, jm1]
                if wn > 0.0:
                    d = cur - fimg[im1, jm1]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        nl = labels[im1, jm1]
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > eps:
                            weight_moved = True
                        conquered = True
                        if nw < wmin:
                            wmin = nw
                        if nw > wmax:
                            wmax = nw
                        w = nw
            else:
                for k in range(8):
                    ni = i + OFF_I[k]
                    nj = j + OFF_J[k]
                    if 0 <= ni < rows and 0 <= nj < cols:
                        wn = weights[ni, nj]
                        if wn > 0.0:
                            d = cur - fimg[ni, nj]
                            if d < 0.0:
                                d = -d
                            s = wn * (1.0 - d * inv_imax)
                            if s > w:
                                if balanced:
                                    nw = 0.5 * w + 0.5 * s
                                else:
                                    nw = s
                                nl = labels[ni, nj]
                                if nl != lab:
                                    label_changed = True
                                    lab = nl
                                if nw - w > eps:
                                    weight_moved = True
                                conquered = True
                                if nw < wmin:
                                    wmin = nw
                                if nw > wmax:
                                    wmax = nw
                                w = nw
            labels[i, j] = lab
            weights[i, j] = w
    return label_changed, weight_moved, conquered, wmin, wmax
