"""Straight-loop reference implementations used only by the tests.

Nothing here imports the package's numerical code, so agreement with it is
an independent check.
"""
import math


def sqdist(a, b):
    return sum((float(p) - float(q)) ** 2 for p, q in zip(a, b))


def scores(centroids, subnets, k, x, sigma=None, scale=None):
    """Class-wise sums of exp(-||x - c||^2 / sigma^2); the default sigma is
    the largest distance from x to any centroid divided by k."""
    d2 = [sqdist(x, c) for c in centroids]
    if sigma is None:
        d_max = math.sqrt(max(d2))
        sigma = d_max * scale if scale is not None else d_max / k
    out = [0.0] * k
    for dist, s in zip(d2, subnets):
        out[s] += math.exp(-dist / (sigma * sigma))
    return out


def argmax_first(values):
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def nearest(centroids, x):
    d2 = [sqdist(x, c) for c in centroids]
    return argmax_first([-v for v in d2]), d2
