"""Index bookkeeping for tables over radix-nu spin configurations.

A table over the sites ``(s_0, s_1, ...)`` of a region stores configuration ``sigma`` at
``sum_k label(s_k) * nu**k``: the first site is the least significant digit.
"""

from typing import Iterable, Sequence

import numpy as np


def _axis_order(sites: Sequence[int], groups: Sequence[Iterable[int]]) -> tuple[list[int], list[int]]:
    position = {site: k for k, site in enumerate(sites)}
    groups = [tuple(group) for group in groups]
    used = {site for group in groups for site in group}
    missing = used - position.keys()
    if missing:
        raise ValueError(f"sites {sorted(missing)} are not in the table")
    if sum(len(group) for group in groups) != len(used):
        raise ValueError("groups overlap")
    rest = tuple(site for site in sites if site not in used)
    axes, sizes = [], []
    for group in (*groups, rest):
        axes.extend(position[site] for site in reversed(group))
        sizes.append(len(group))
    return axes, sizes


def grouped(values: np.ndarray, sites: Sequence[int], local_dim: int, *groups: Iterable[int]) -> np.ndarray:
    """Reshape a flat table into axes ``(group_1, ..., group_m, rest)``.

    Each axis is indexed by the configuration code of its group in that group's own site order.
    """
    axes, sizes = _axis_order(sites, groups)
    tensor = np.asarray(values).reshape((local_dim,) * len(sites)).T
    return tensor.transpose(axes).reshape([local_dim**size for size in sizes])


def ungrouped(array: np.ndarray, sites: Sequence[int], local_dim: int, *groups: Iterable[int]) -> np.ndarray:
    """Inverse of :func:`grouped`."""
    axes, _ = _axis_order(sites, groups)
    tensor = np.asarray(array).reshape((local_dim,) * len(sites))
    return np.ascontiguousarray(tensor.transpose(np.argsort(axes)).T).reshape(-1)


def config_codes(sites: Sequence[int], local_dim: int, group: Iterable[int]) -> np.ndarray:
    """Code of ``group``'s configuration for every entry of a flat table over ``sites``."""
    return subcodes(np.arange(local_dim ** len(sites), dtype=np.int64), sites, tuple(group), local_dim)


def subcodes(codes: np.ndarray, sites: Sequence[int], sub_sites: Sequence[int], local_dim: int = 2) -> np.ndarray:
    """Codes of the configurations restricted to ``sub_sites``, given codes over ``sites``."""
    position = {site: k for k, site in enumerate(sites)}
    codes = np.asarray(codes)
    result = np.zeros_like(codes)
    for k, site in enumerate(sub_sites):
        result += ((codes // local_dim ** position[site]) % local_dim) * local_dim**k
    return result
