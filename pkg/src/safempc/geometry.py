"""Obstacle primitives: unsafe-set and sensing-region level sets.

Each obstacle carries two smooth scalar functions of workspace position:
`h` is negative inside the unsafe set and zero on its boundary, `sense` is
the same family inflated to the sensing region.  Squared-distance forms are
used so gradients stay finite at shape centers.  Exact Euclidean surface
distances (possibly negative when violated) come from `surface_distance`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError

SHAPES = ("circle2d", "sphere3d", "cylinder3d", "torus3d")

# sharpness of the log-sum-exp smooth maximum joining the cylinder's
# radial and axial level sets
CYLINDER_BETA = 10.0

_AXES = {"x": 0, "y": 1, "z": 2}


@dataclass(frozen=True)
class ObstacleSpec:
    """Geometric obstacle with an unsafe radius and a larger sensing radius.

    shape-specific extras: `half_height` and `axis` for cylinder3d,
    `major_radius` for torus3d (whose `radius`/`sense_radius` are tube radii).
    """

    shape: str
    center: tuple
    radius: float
    sense_radius: float
    half_height: float = 0.0
    axis: str = "z"
    major_radius: float = 0.0

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise UsageError(f"unknown obstacle shape {self.shape!r}")
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if len(self.center) != self.dim:
            raise UsageError(
                f"{self.shape} center must have {self.dim} coordinates")
        if not self.sense_radius > self.radius:
            raise UsageError("sense_radius must strictly exceed radius")
        if self.shape == "cylinder3d":
            if self.half_height <= 0:
                raise UsageError("cylinder3d requires half_height > 0")
            if self.axis not in _AXES:
                raise UsageError("cylinder3d axis must be one of x, y, z")
        if self.shape == "torus3d" and self.major_radius <= self.radius:
            raise UsageError("torus3d requires major_radius > tube radius")

    @property
    def dim(self) -> int:
        return 2 if self.shape == "circle2d" else 3


def _check_pos(obs: ObstacleSpec, p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape[-1:] != (obs.dim,):
        raise UsageError(
            f"{obs.shape} expects positions of dim {obs.dim}, "
            f"got trailing shape {p.shape[-1:]}")
    return p


def _smooth_max(a, b, beta=CYLINDER_BETA):
    m = np.maximum(a, b)
    return m + np.log(np.exp(beta * (a - m)) + np.exp(beta * (b - m))) / beta


def _cylinder_levels(obs, p, radius, half_height):
    axis = _AXES[obs.axis]
    planar = [i for i in range(3) if i != axis]
    c = np.asarray(obs.center)
    dp = p[..., planar] - c[planar]
    radial = (dp ** 2).sum(axis=-1) - radius ** 2
    axial = (p[..., axis] - c[axis]) ** 2 - half_height ** 2
    return radial, axial


def _torus_level(obs, p, tube_radius):
    c = np.asarray(obs.center)
    ring = np.hypot(p[..., 0] - c[0], p[..., 1] - c[1]) - obs.major_radius
    return ring ** 2 + (p[..., 2] - c[2]) ** 2 - tube_radius ** 2


def _level(obs: ObstacleSpec, p, inflated: bool):
    r = obs.sense_radius if inflated else obs.radius
    if obs.shape in ("circle2d", "sphere3d"):
        d = p - np.asarray(obs.center)
        return (d ** 2).sum(axis=-1) - r ** 2
    if obs.shape == "torus3d":
        return _torus_level(obs, p, r)
    # cylinder3d: sensing set inflates both the radius and the half height
    hh = obs.half_height + (obs.sense_radius - obs.radius if inflated else 0.0)
    radial, axial = _cylinder_levels(obs, p, r, hh)
    return _smooth_max(radial, axial)


def h(obs: ObstacleSpec, p) -> np.ndarray:
    """Unsafe-set level function: <= 0 inside the obstacle."""
    return _level(obs, _check_pos(obs, p), inflated=False)


def sense(obs: ObstacleSpec, p) -> np.ndarray:
    """Sensing-region level function: <= 0 inside the sensing region."""
    return _level(obs, _check_pos(obs, p), inflated=True)


def _grad_level(obs: ObstacleSpec, p, inflated: bool):
    r = obs.sense_radius if inflated else obs.radius
    if obs.shape in ("circle2d", "sphere3d"):
        return 2.0 * (p - np.asarray(obs.center))
    if obs.shape == "torus3d":
        c = np.asarray(obs.center)
        ex, ey = p[..., 0] - c[0], p[..., 1] - c[1]
        rho = np.hypot(ex, ey)
        rho_safe = np.where(rho == 0.0, 1.0, rho)
        fac = 2.0 * (rho - obs.major_radius) / rho_safe
        g = np.empty_like(p)
        g[..., 0] = fac * ex
        g[..., 1] = fac * ey
        g[..., 2] = 2.0 * (p[..., 2] - c[2])
        return g
    hh = obs.half_height + (obs.sense_radius - obs.radius if inflated else 0.0)
    radial, axial = _cylinder_levels(obs, p, r, hh)
    # log-sum-exp weights
    m = np.maximum(radial, axial)
    wa = np.exp(CYLINDER_BETA * (radial - m))
    wb = np.exp(CYLINDER_BETA * (axial - m))
    tot = wa + wb
    axis = _AXES[obs.axis]
    planar = [i for i in range(3) if i != axis]
    c = np.asarray(obs.center)
    g = np.zeros_like(p)
    for i in planar:
        g[..., i] = (wa / tot) * 2.0 * (p[..., i] - c[i])
    g[..., axis] = (wb / tot) * 2.0 * (p[..., axis] - c[axis])
    return g


def grad_h(obs: ObstacleSpec, p) -> np.ndarray:
    """Analytic gradient of `h` with respect to position."""
    return _grad_level(obs, _check_pos(obs, p), inflated=False)


def grad_sense(obs: ObstacleSpec, p) -> np.ndarray:
    """Analytic gradient of `sense` with respect to position."""
    return _grad_level(obs, _check_pos(obs, p), inflated=True)


def surface_distance(obs: ObstacleSpec, p) -> np.ndarray:
    """Signed Euclidean distance from position(s) to the obstacle surface."""
    p = _check_pos(obs, p)
    c = np.asarray(obs.center)
    if obs.shape in ("circle2d", "sphere3d"):
        return np.linalg.norm(p - c, axis=-1) - obs.radius
    if obs.shape == "torus3d":
        ring = np.hypot(p[..., 0] - c[0], p[..., 1] - c[1]) - obs.major_radius
        return np.hypot(ring, p[..., 2] - c[2]) - obs.radius
    # finite cylinder
    axis = _AXES[obs.axis]
    planar = [i for i in range(3) if i != axis]
    dr = np.linalg.norm(p[..., planar] - c[planar], axis=-1) - obs.radius
    dz = np.abs(p[..., axis] - c[axis]) - obs.half_height
    outside = np.hypot(np.maximum(dr, 0.0), np.maximum(dz, 0.0))
    inside = np.minimum(np.maximum(dr, dz), 0.0)
    return outside + inside


def positions_from_states(obs: ObstacleSpec, states) -> np.ndarray:
    """Extract the workspace-position block (leading coordinates) of states."""
    states = np.asarray(states, dtype=float)
    if states.shape[-1] < obs.dim:
        raise UsageError(
            f"state dim {states.shape[-1]} too small for a {obs.shape}")
    return states[..., : obs.dim]


def h_state(obs: ObstacleSpec, x) -> np.ndarray:
    """`h` evaluated on the position block of full state vector(s)."""
    return h(obs, positions_from_states(obs, x))


def sense_state(obs: ObstacleSpec, x) -> np.ndarray:
    return sense(obs, positions_from_states(obs, x))


def min_distance(obs: ObstacleSpec, trajectory) -> float:
    """Smallest surface distance over a sequence of full state vectors."""
    traj = np.atleast_2d(np.asarray(trajectory, dtype=float))
    if traj.size == 0:
        raise UsageError("min_distance requires a non-empty trajectory")
    return float(surface_distance(obs, positions_from_states(obs, traj)).min())


def obstacle_from_dict(d: dict) -> ObstacleSpec:
    """Build an ObstacleSpec from a scenario-file mapping."""
    d = dict(d)
    try:
        shape = d.pop("shape")
        center = d.pop("center")
        radius = float(d.pop("radius"))
        sense_radius = float(d.pop("sense_radius"))
    except KeyError as e:
        raise UsageError(f"obstacle missing required key {e.args[0]!r}") from None
    kwargs = {}
    for key in ("half_height", "major_radius"):
        if key in d:
            kwargs[key] = float(d.pop(key))
    if "axis" in d:
        kwargs["axis"] = str(d.pop("axis"))
    if d:
        raise UsageError(f"unknown obstacle keys: {sorted(d)}")
    return ObstacleSpec(shape=shape, center=tuple(center), radius=radius,
                        sense_radius=sense_radius, **kwargs)
