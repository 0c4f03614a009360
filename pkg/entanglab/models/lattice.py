from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator

import numpy as np

from entanglab.core.errors import RegionError


@dataclass(frozen=True)
class Window:
    """Rectangular box of Z^d with open boundary, sites enumerated row-major."""

    dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        if not 1 <= len(dims) <= 3:
            raise RegionError(f"window dimension must be 1, 2 or 3, got {len(dims)}")
        if any(n < 1 for n in dims):
            raise RegionError(f"window edge lengths must be positive, got {list(dims)}")
        object.__setattr__(self, "dims", dims)

    @property
    def dimension(self) -> int:
        return len(self.dims)

    @property
    def site_count(self) -> int:
        return int(np.prod(self.dims))

    @cached_property
    def coordinates(self) -> np.ndarray:
        """Integer coordinates of every site, shape (site_count, d)."""
        grid = np.indices(self.dims).reshape(self.dimension, -1).T
        grid.flags.writeable = False
        return grid

    def coords(self, site: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.coordinates[site])

    def index(self, coords: Iterable[int]) -> int:
        coords = tuple(int(x) for x in coords)
        if len(coords) != self.dimension or any(not 0 <= x < n for x, n in zip(coords, self.dims)):
            raise RegionError(f"coordinates {list(coords)} outside window {list(self.dims)}")
        return int(np.ravel_multi_index(coords, self.dims))

    def distance(self, u: int, v: int) -> int:
        """Graph distance, which on an open box is the l1 distance."""
        return int(np.abs(self.coordinates[u] - self.coordinates[v]).sum())

    def neighbors(self, site: int) -> list[int]:
        x = self.coordinates[site]
        found = []
        for axis in range(self.dimension):
            for step in (-1, 1):
                y = x.copy()
                y[axis] += step
                if 0 <= y[axis] < self.dims[axis]:
                    found.append(int(np.ravel_multi_index(tuple(y), self.dims)))
        return sorted(found)

    def region(self, sites: Iterable[int] = ()) -> "Region":
        return Region(self, tuple(sites))

    def box(self, lo: Iterable[int], hi: Iterable[int]) -> "Region":
        """Region of all sites with lo <= x <= hi componentwise."""
        lo, hi = tuple(lo), tuple(hi)
        if len(lo) != self.dimension or len(hi) != self.dimension:
            raise RegionError(f"box corners must have {self.dimension} coordinates")
        self.index(lo)
        self.index(hi)
        if any(a > b for a, b in zip(lo, hi)):
            raise RegionError(f"box lo {list(lo)} exceeds hi {list(hi)}")
        inside = np.all((self.coordinates >= lo) & (self.coordinates <= hi), axis=1)
        return Region(self, tuple(np.flatnonzero(inside)))

    @property
    def everything(self) -> "Region":
        return Region(self, tuple(range(self.site_count)))


@dataclass(frozen=True)
class Region:
    """Sorted set of site indices of a window. May be empty."""

    window: Window
    sites: tuple[int, ...] = field(default=())

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if len(set(sites)) != len(sites):
            raise RegionError(f"region has duplicate sites: {list(sites)}")
        if any(not 0 <= s < self.window.site_count for s in sites):
            raise RegionError(f"region sites {list(sites)} outside window of {self.window.site_count} sites")
        object.__setattr__(self, "sites", tuple(sorted(sites)))

    def __len__(self) -> int:
        return len(self.sites)

    def __iter__(self) -> Iterator[int]:
        return iter(self.sites)

    def __contains__(self, site: object) -> bool:
        return site in self._members

    @cached_property
    def _members(self) -> frozenset[int]:
        return frozenset(self.sites)

    def _check_window(self, other: "Region") -> None:
        if other.window != self.window:
            raise RegionError("regions belong to different windows")

    def __or__(self, other: "Region") -> "Region":
        self._check_window(other)
        return Region(self.window, tuple(self._members | other._members))

    def __sub__(self, other: "Region") -> "Region":
        self._check_window(other)
        return Region(self.window, tuple(self._members - other._members))

    def __and__(self, other: "Region") -> "Region":
        self._check_window(other)
        return Region(self.window, tuple(self._members & other._members))

    def __le__(self, other: "Region") -> bool:
        self._check_window(other)
        return self._members <= other._members

    def isdisjoint(self, other: "Region") -> bool:
        self._check_window(other)
        return self._members.isdisjoint(other._members)

    def complement(self) -> "Region":
        return self.window.everything - self

    def is_empty(self) -> bool:
        return not self.sites


@dataclass(frozen=True)
class Tripartition:
    a: Region
    b: Region
    c: Region

    def __post_init__(self):
        if not (self.a.window == self.b.window == self.c.window):
            raise RegionError("tripartition parts belong to different windows")
        if not (self.a.isdisjoint(self.b) and self.a.isdisjoint(self.c) and self.b.isdisjoint(self.c)):
            raise RegionError("tripartition parts overlap")

    @property
    def window(self) -> Window:
        return self.a.window

    def covers_window(self) -> bool:
        return len(self.a) + len(self.b) + len(self.c) == self.window.site_count

    def describe(self) -> dict[str, list[int]]:
        return {"a": list(self.a.sites), "b": list(self.b.sites), "c": list(self.c.sites)}


@dataclass(frozen=True)
class RegularityReport:
    boundary_size: int
    length_scale: float
    c_d: float
    C_d: float
    is_regular: bool
    widths: tuple[int, ...] = ()
    ratios: tuple[float, ...] = ()
