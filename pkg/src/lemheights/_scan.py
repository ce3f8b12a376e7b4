"""Coefficient-box enumeration shared by the number-theory scans and the searches."""

from __future__ import annotations

import itertools

import numpy as np

from .errors import ResourceCapError


def box_size(max_degree: int, coeff_bound: int, monic: bool = False, min_degree: int = 0) -> int:
    """Number of sign-normalized (leading > 0) polynomials in the box."""
    lead = 1 if monic else coeff_bound
    return sum(lead * (2 * coeff_bound + 1) ** n for n in range(min_degree, max_degree + 1))


def check_cap(count: int, cap: int):
    if count > cap:
        raise ResourceCapError(f"scan of {count} candidates exceeds cap {cap}", candidates=count, cap=cap)


def shards(max_degree: int, coeff_bound: int, monic: bool = False, min_degree: int = 0, chunk: int = 200_000):
    """Yield ``(shard_id, degree, coeffs)`` with ``coeffs`` an int64 ``(N, degree + 1)`` array.

    Shards are keyed by (degree, leading coefficient, block of the next
    coefficients); within a shard rows are in lexicographic order of the
    remaining coefficients. The union over shards is the whole box.
    """
    rng = np.arange(-coeff_bound, coeff_bound + 1, dtype=np.int64)
    leads = [1] if monic else list(range(1, coeff_bound + 1))
    for n in range(min_degree, max_degree + 1):
        for lead in leads:
            if n == 0:
                yield (n, lead, 0), n, np.array([[lead]], dtype=np.int64)
                continue
            # split the free coefficients into an outer (python) and inner (numpy) part
            inner = 0
            while inner < n and (2 * coeff_bound + 1) ** (inner + 1) <= chunk:
                inner += 1
            inner = max(inner, 1)
            outer = n - inner
            grid = np.stack(np.meshgrid(*([rng] * inner), indexing="ij"), axis=-1).reshape(-1, inner)
            for block_id, high in enumerate(itertools.product(rng.tolist(), repeat=outer)):
                rows = np.empty((grid.shape[0], n + 1), dtype=np.int64)
                rows[:, :inner] = grid[:, ::-1]
                if outer:
                    rows[:, inner:n] = np.array(high[::-1], dtype=np.int64)
                rows[:, n] = lead
                yield (n, lead, block_id), n, rows
