"""Nonlinear sequence transformations for slowly convergent partial sums.

The workhorse is the Levin u-transformation, which handles both alternating
series with O(1/n) decay and polynomially decaying hypergeometric tails at
z = 1.  It is written against raw mpf values from a caller-supplied mpmath
context: acceleration is always the inner loop of something else here, so it
stays unwrapped for speed.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["levin_u", "accelerate_partial_sums"]


def levin_u(partial_sums: Sequence, mp, order: int | None = None):
    """Levin u-estimate of the limit of `partial_sums`.

    Uses the standard recursive formulation with remainder estimates
    w_n = (n+1) * a_n (a_n the last term absorbed into S_n), beta = 1.
    Returns (estimate, error_guess) where error_guess is the difference
    between the two highest-order estimates, or None if fewer than three
    sums were supplied.

    The transform is numerically delicate: it forms divided differences of
    nearly equal quantities, so the caller should supply sums computed with
    2x the guard digits it wants out.
    """
    n = len(partial_sums)
    if n < 3:
        return (partial_sums[-1] if partial_sums else mp.mpf(0)), None
    if order is None:
        order = n - 2
    order = min(order, n - 2)
    one = mp.mpf(1)

    # terms a_j = S_j - S_{j-1}; a_0 = S_0
    terms = [partial_sums[0]] + [
        partial_sums[j] - partial_sums[j - 1] for j in range(1, n)
    ]
    # Use the last (order+2) sums so the deepest column is fed by the tail,
    # where the asymptotic model fits best.
    base = n - (order + 2)
    # A zero term gives no remainder estimate (w_n = 0), so start the window
    # after the last one.  A trailing zero means the sums are stagnant and
    # the limit is already in hand.
    for j in range(n - 1, base - 1, -1):
        if terms[j] == 0:
            base = j + 1
            break
    order = n - base - 2
    if order < 1:
        return partial_sums[-1], abs(partial_sums[-1] - partial_sums[-2])
    num = []
    den = []
    for j in range(order + 2):
        idx = base + j
        a = terms[idx]
        w = (idx + 1) * a
        num.append(partial_sums[idx] / w)
        den.append(one / w)

    # Walk the Levin table depth-first, recording the estimate at each order;
    # the returned value is the one whose neighbouring orders agree best
    # (deep orders eventually go unstable, so "last" is not "best").
    prev_est = None
    best_est = partial_sums[-1]
    best_err = None
    b = mp.mpf(base + 1)
    for k in range(1, order + 2):
        for j in range(order + 2 - k):
            nj = b + j
            if k == 1:
                factor = one
            else:
                factor = nj * (nj + k - 1) ** (k - 2) / (nj + k) ** (k - 1)
            num[j] = num[j + 1] - num[j] * factor
            den[j] = den[j + 1] - den[j] * factor
        if den[0] == 0:
            continue
        est = num[0] / den[0]
        if prev_est is not None:
            gap = abs(est - prev_est)
            if best_err is None or gap < best_err:
                best_est, best_err = est, gap
        prev_est = est
    return best_est, best_err


def accelerate_partial_sums(partial_sums: Sequence, mp, target_digits: int):
    """Scan Levin orders for a self-consistent limit estimate.

    Runs the u-transform at increasing depth over the supplied sums and keeps
    the estimate whose last two orders agree best.  Returns (value, achieved)
    where achieved is a (conservative) decimal digit count from that
    agreement, so callers can reject a stalled acceleration honestly.
    """
    best = partial_sums[-1]
    best_err = abs(partial_sums[-1] - partial_sums[-2]) if len(partial_sums) > 1 else mp.inf
    est, err = levin_u(partial_sums, mp)
    if err is not None and err < best_err:
        best, best_err = est, err
    if best_err == 0:
        return best, target_digits + 10
    scale = max(abs(best), mp.mpf(1))
    achieved = int(mp.floor(-mp.log10(best_err / scale))) if best_err > 0 else 0
    return best, max(achieved, 0)
