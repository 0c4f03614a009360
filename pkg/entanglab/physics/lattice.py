import math

import numpy as np

from entanglab.core.errors import RegionError
from entanglab.models import Region, RegularityReport, Tripartition, Window


def distances_from(region: Region) -> np.ndarray:
    """Graph distance from every site of the window to the nearest site of ``region``."""
    if region.is_empty():
        raise RegionError("empty region")
    coords = region.window.coordinates
    gaps = np.abs(coords[:, None, :] - coords[None, list(region.sites), :]).sum(axis=2)
    return gaps.min(axis=1)


def region_distance(first: Region, second: Region) -> int:
    return int(distances_from(first)[list(second.sites)].min())


def boundary(a: Region) -> Region:
    """Sites of ``a`` with a nearest neighbor outside ``a``."""
    if a.is_empty():
        raise RegionError("empty region")
    window = a.window
    return Region(window, tuple(u for u in a if any(v not in a for v in window.neighbors(u))))


def buffer(a: Region, l: int) -> Tripartition:
    """Tripartition (A, B_l, C) with B_l the sites outside A within distance l of A."""
    if l < 1:
        raise RegionError(f"buffer width must be at least 1, got {l}")
    distance = distances_from(a)
    shell = Region(a.window, tuple(np.flatnonzero((distance >= 1) & (distance <= l))))
    return Tripartition(a, shell, a.complement() - shell)


def split_buffer(a1: Region, a2: Region, l: int) -> tuple[Region, Region, Region]:
    """Disjoint width-``l`` buffers around two regions at distance at least ``3l``."""
    if not a1.isdisjoint(a2):
        raise RegionError("regions overlap")
    if region_distance(a1, a2) < 3 * l:
        raise RegionError("buffers overlap")
    b1 = buffer(a1, l).b - a2
    b2 = buffer(a2, l).b - a1
    if not b1.isdisjoint(b2):
        raise RegionError("buffers overlap")
    return b1, b2, (a1 | a2 | b1 | b2).complement()


def regularity_check(a: Region) -> RegularityReport:
    """Measure the constants bounding |B_l| / (l |dA|) for widths 1..ceil(L(A))."""
    if len(a) == a.window.site_count:
        raise RegionError("region covers the window and has no boundary")
    boundary_size = len(boundary(a))
    provisional = len(a) / boundary_size
    widths = tuple(range(1, max(1, math.ceil(provisional)) + 1))
    ratios = tuple(len(buffer(a, l).b) / (l * boundary_size) for l in widths)
    c_d, C_d = min(ratios), max(ratios)
    length_scale = len(a) / (c_d * boundary_size) if c_d > 0 else math.inf
    return RegularityReport(
        boundary_size=boundary_size,
        length_scale=length_scale,
        c_d=c_d,
        C_d=C_d,
        is_regular=c_d > 0,
        widths=widths,
        ratios=ratios,
    )


def end_block(window: Window, size: int) -> Region:
    """The first ``size`` sites of a one-dimensional window."""
    if window.dimension != 1 or not 0 < size <= window.site_count:
        raise RegionError(f"end block of size {size} not available in window {list(window.dims)}")
    return Region(window, tuple(range(size)))
