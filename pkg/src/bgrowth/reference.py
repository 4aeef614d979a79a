"""Straight-line interpreters kept as test oracles for the fast engines.

``reference_run`` is a deliberately naive, pure-Python rendering of the
growth procedure: one pass is a row-major scan, each pixel consults its
eight neighbours in the fixed order N, NE, E, SE, S, SW, W, NW, and all
updates happen in place.  The optimized engines must match it bit for
bit, so every arithmetic expression here is written exactly as the
compiled kernels write it.  Do not "improve" this module for speed.

``max_contrast_reference`` is an independent connected-component oracle
for the special case of two-valued images, where growth degenerates to
flood fill.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .grid import GrayImage, LabelMap, Mask, same_shape

# (di, dj) for N, NE, E, SE, S, SW, W, NW — the normative visiting order
NEIGHBOR_OFFSETS = ((-1, 0), (-1, 1), (0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1))


def reference_run(
    image: GrayImage,
    seeds: LabelMap,
    max_iters: int = 30,
    weight_epsilon: float = 1e-9,
    balanced: bool = True,
    check_conquests: bool = True,
):
    """Run the growth procedure naively; returns (labels, weights, iterations, converged).

    ``balanced=True`` blends the conquered weight with the attack
    strength (0.5/0.5); ``balanced=False`` overwrites it, which is the
    classic cellular-automaton rule.  With ``check_conquests`` every
    single conquest is asserted to keep the weight in [0, 1].
    """
    if not same_shape(image, seeds):
        raise ValueError(
            f"dimension mismatch: image {image.rows}x{image.cols} vs seeds {seeds.rows}x{seeds.cols}"
        )
    if seeds.seed_count() == 0:
        raise ValueError("no seeds provided")

    rows, cols = image.rows, image.cols
    fimg = [[float(image.pixels[i, j]) for j in range(cols)] for i in range(rows)]
    labels = [[int(seeds.labels[i, j]) for j in range(cols)] for i in range(rows)]
    weights = [[1.0 if labels[i][j] != 0 else 0.0 for j in range(cols)] for i in range(rows)]

    imax = image.max_value
    inv_imax = 1.0 / float(imax if imax > 0 else 1)

    iterations = 0
    converged = False
    for _ in range(max_iters):
        iterations += 1
        label_changed = False
        weight_moved = False
        for i in range(rows):
            for j in range(cols):
                w = weights[i][j]
                cur = fimg[i][j]
                lab = labels[i][j]
                for di, dj in NEIGHBOR_OFFSETS:
                    ni = i + di
                    nj = j + dj
                    if ni < 0 or ni >= rows or nj < 0 or nj >= cols:
                        continue
                    wn = weights[ni][nj]
                    if wn <= 0.0:
                        continue
                    d = cur - fimg[ni][nj]
                    if d < 0.0:
                        d = -d
                    s = wn * (1.0 - d * inv_imax)
                    if s > w:
                        nl = labels[ni][nj]
                        if balanced:
                            nw = 0.5 * w + 0.5 * s
                        else:
                            nw = s
                        if check_conquests and not 0.0 <= nw <= 1.0:
                            raise AssertionError(f"conquest left weight {nw!r} at ({i},{j})")
                        if nl != lab:
                            label_changed = True
                            lab = nl
                        if nw - w > weight_epsilon:
                            weight_moved = True
                        w = nw
                labels[i][j] = lab
                weights[i][j] = w
        if not label_changed and not weight_moved:
            converged = True
            break

    label_arr = np.array(labels, dtype=np.int8)
    weight_arr = np.array(weights, dtype=np.float64)
    return LabelMap(label_arr), weight_arr, iterations, converged


def max_contrast_reference(image: GrayImage, seeds: LabelMap) -> LabelMap:
    """Flood-fill oracle for two-valued images.

    Each pixel takes the label of any seed it is 8-connected to through
    pixels of identical intensity; components without seeds stay
    unlabelled.  Rejects images that are not exactly two-valued {0, max}
    and components seeded with both classes (the fill would be
    ambiguous there).
    """
    if not same_shape(image, seeds):
        raise ValueError("dimension mismatch between image and seeds")
    values = np.unique(image.pixels)
    imax = image.max_value
    if imax == 0 or not np.array_equal(values, np.array([0, imax])):
        raise ValueError("image is not two-valued {0, max}")

    eight = np.ones((3, 3), dtype=bool)
    out = np.zeros((image.rows, image.cols), dtype=np.int8)
    for value in values:
        comp, n = ndimage.label(image.pixels == value, structure=eight)
        for k in range(1, n + 1):
            inside = comp == k
            seed_vals = np.unique(seeds.labels[inside])
            seed_vals = seed_vals[seed_vals != 0]
            if len(seed_vals) > 1:
                raise ValueError(f"component of value {int(value)} holds both seed classes")
            if len(seed_vals) == 1:
                out[inside] = seed_vals[0]
    return LabelMap(out)
