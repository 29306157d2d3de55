"""Geometric primitives for a 1D aperture observing a 1D scene segment.

Coordinate conventions used throughout the package:

* the scene lives near the plane z = 0,
* the aperture occupies the interval [a1, a2] on the line z = -D,
* a scene segment is parameterized as p(u) = (t + u*cos(theta), -u*sin(theta))
  for u in [-half_length, +half_length], so positive theta tilts the u > 0
  end of the segment toward the aperture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WaveContext:
    """Monochromatic illumination context.

    Attributes
    ----------
    wavelength : float
        Free-space wavelength in meters, > 0.
    """

    wavelength: float

    def __post_init__(self):
        if not (self.wavelength > 0.0):
            raise ValueError(f"wavelength must be positive, got {self.wavelength}")

    @property
    def k(self) -> float:
        """Angular wavenumber 2*pi/wavelength in rad/m."""
        return TWO_PI / self.wavelength


@dataclass(frozen=True)
class Aperture:
    """Linear aperture [a1, a2] on the plane z = -standoff.

    Attributes
    ----------
    a1, a2 : float
        Aperture endpoints in meters, a1 < a2.
    standoff : float
        Distance D > 0 between the aperture line and the z = 0 scene plane.
    """

    a1: float
    a2: float
    standoff: float

    def __post_init__(self):
        if not (self.a1 < self.a2):
            raise ValueError(f"aperture requires a1 < a2, got [{self.a1}, {self.a2}]")
        if not (self.standoff > 0.0):
            raise ValueError(f"standoff must be positive, got {self.standoff}")

    @property
    def length(self) -> float:
        return self.a2 - self.a1

    @property
    def center(self) -> float:
        return 0.5 * (self.a1 + self.a2)

    @property
    def z_plane(self) -> float:
        """z coordinate of the aperture line."""
        return -self.standoff

    @classmethod
    def centered(cls, length: float, standoff: float) -> "Aperture":
        """Aperture of the given length centered on x = 0."""
        return cls(-0.5 * length, 0.5 * length, standoff)


@dataclass(frozen=True)
class SceneSegment:
    """Straight scene segment of length 2*half_length.

    The segment passes through (t, 0) and makes angle theta with the x axis:
    p(u) = (t + u*cos(theta), -u*sin(theta)).  theta = 0 and t = 0 is the
    canonical broadside segment; |theta| = pi/2 is a segment along the range
    axis.

    Attributes
    ----------
    half_length : float
        Half of the segment arc length, >= 0.
    theta : float
        Tilt angle in radians, |theta| <= pi/2.
    shift : float
        Cross-range offset t of the segment midpoint.
    """

    half_length: float
    theta: float = 0.0
    shift: float = 0.0

    def __post_init__(self):
        if self.half_length < 0.0:
            raise ValueError(f"half_length must be >= 0, got {self.half_length}")
        if abs(self.theta) > 0.5 * math.pi + 1e-12:
            raise ValueError(f"|theta| must be <= pi/2, got {self.theta}")

    @property
    def length(self) -> float:
        return 2.0 * self.half_length

    def point(self, u: float) -> tuple[float, float]:
        """Scene point p(u) = (t + u*cos(theta), -u*sin(theta))."""
        return (self.shift + u * math.cos(self.theta), -u * math.sin(self.theta))

    def points(self, u: np.ndarray) -> np.ndarray:
        """Vectorized p(u); returns an (n, 2) array of (x, z) pairs."""
        u = np.asarray(u, dtype=float)
        return np.stack(
            [self.shift + u * math.cos(self.theta), -u * math.sin(self.theta)],
            axis=-1,
        )

    @property
    def geometry_class(self) -> str:
        """Classification tag: G1 centered broadside, G2 shifted broadside,
        G3 centered tilted, G4 shifted and tilted."""
        tilted = self.theta != 0.0
        shifted = self.shift != 0.0
        if not tilted:
            return "G2" if shifted else "G1"
        return "G4" if shifted else "G3"


def path_length(x_on_aperture: float, scene_point, aperture: Aperture) -> float:
    """One-way propagation distance from an aperture element to a scene point.

    Parameters
    ----------
    x_on_aperture : float
        Element position along the aperture line (x coordinate).
    scene_point : (float, float)
        Scene point (x', z') with z' > -standoff.
    aperture : Aperture
        Supplies the aperture plane z = -standoff.

    Returns
    -------
    float
        Euclidean distance sqrt((x - x')^2 + (z' + D)^2).
    """
    xp, zp = float(scene_point[0]), float(scene_point[1])
    dz = zp - aperture.z_plane
    if dz <= 0.0:
        raise ValueError(
            f"scene point z'={zp} lies on or behind the aperture plane z={aperture.z_plane}"
        )
    return math.hypot(x_on_aperture - xp, dz)


def element_view_angle(x_on_aperture: float, scene_point, aperture: Aperture) -> float:
    """Viewing angle of a single aperture element toward a scene point.

    Measured from the range (z) axis; positive when the scene point lies on
    the +x side of the element.
    """
    xp, zp = float(scene_point[0]), float(scene_point[1])
    dz = zp - aperture.z_plane
    if dz <= 0.0:
        raise ValueError(
            f"scene point z'={zp} lies on or behind the aperture plane z={aperture.z_plane}"
        )
    return math.atan2(xp - x_on_aperture, dz)


def viewing_angles(scene_point, aperture: Aperture) -> tuple[float, float]:
    """Angular extent [alpha, beta] under which the aperture sees a point.

    alpha is the angle subtended at the far edge a2, beta at the near edge
    a1, both measured from the range axis; alpha <= beta always because the
    per-element angle decreases as the element moves toward +x.

    Returns
    -------
    (float, float)
        (alpha, beta) in radians, each in (-pi/2, pi/2).
    """
    beta = element_view_angle(aperture.a1, scene_point, aperture)
    alpha = element_view_angle(aperture.a2, scene_point, aperture)
    return alpha, beta
