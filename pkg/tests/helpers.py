"""Independent reference oracles used by the tests.

These deliberately re-derive results by the slowest, most literal method
available (bit-by-bit shift register, exhaustive enumeration) so they stay
independent of the implementations they check.
"""

from __future__ import annotations

import numpy as np


def crc16_bitwise(data: bytes) -> int:
    """Bit-by-bit CRC-16 shift register: init 0xFFFF, reflected poly 0xA001."""
    crc = 0xFFFF
    for byte in data:
        crc ^= byte
        for _ in range(8):
            lsb = crc & 1
            crc >>= 1
            if lsb:
                crc ^= 0xA001
    return crc


def confusion_brute_force(y_true, y_pred) -> dict[int, tuple[int, int, int, int]]:
    """Per-class (tp, fp, fn, tn) by walking every (truth, prediction) pair."""
    classes = sorted(set(list(y_true) + list(y_pred)))
    out = {}
    for c in classes:
        tp = fp = fn = tn = 0
        for t, p in zip(y_true, y_pred):
            if t == c and p == c:
                tp += 1
            elif t != c and p == c:
                fp += 1
            elif t == c and p != c:
                fn += 1
            else:
                tn += 1
        out[c] = (tp, fp, fn, tn)
    return out


def exhaustive_best_split(X: np.ndarray, y: np.ndarray) -> tuple[float, int, float]:
    """Brute-force the minimal weighted gini over every (feature, midpoint)."""

    def gini_of(labels):
        _, counts = np.unique(labels, return_counts=True)
        p = counts / len(labels)
        return 1.0 - float(np.sum(p**2))

    best = (np.inf, -1, np.nan)
    for f in range(X.shape[1]):
        vals = np.unique(X[:, f])
        for lo, hi in zip(vals[:-1], vals[1:]):
            thr = (lo + hi) / 2.0
            mask = X[:, f] <= thr
            n_l, n_r = int(mask.sum()), int((~mask).sum())
            w = (n_l * gini_of(y[mask]) + n_r * gini_of(y[~mask])) / len(y)
            if w < best[0]:
                best = (w, f, thr)
    return best
