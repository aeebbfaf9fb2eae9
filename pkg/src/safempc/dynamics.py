"""Continuous-time control-affine vehicle models and their discretization.

All evaluation functions broadcast over arbitrary leading batch dimensions:
`x` has shape (..., state_dim) and `u` shape (..., input_dim).  This lets
the optimizer evaluate whole prediction horizons (and finite-difference
perturbation stacks) in single vectorized calls.
"""

from __future__ import annotations

import numpy as np

from .errors import NumericInputError, UsageError

# central-difference step for numeric state divergence
H_DIV = 1e-5


class DynamicsModel:
    """Base class: continuous field f(x, u), numeric divergence, metadata.

    Subclasses set `name`, `state_dim`, `input_dim`, `position_dim` (how many
    leading state entries are workspace coordinates), `state_labels`,
    `input_labels` and `input_bounds` (per-channel [lo, hi]).
    """

    name: str = "base"
    state_dim: int = 0
    input_dim: int = 0
    position_dim: int = 0
    state_labels: tuple = ()
    input_labels: tuple = ()
    input_bounds: np.ndarray  # (input_dim, 2)

    def f(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Continuous-time derivative f(x, u), same leading shape as x."""
        raise NotImplementedError

    def eval_field(self, x, u) -> np.ndarray:
        x, u = self._check_args(x, u)
        return self.f(x, u)

    def divergence(self, x, u) -> np.ndarray:
        """State divergence of the field, sum_i d f_i / d x_i.

        Default is central finite differences over every state coordinate
        with step H_DIV * max(1, |x_i|); models with analytic structure
        override this.
        """
        x, u = self._check_args(x, u)
        return self._fd_divergence(x, u, np.arange(self.state_dim))

    def _fd_divergence(self, x, u, dims) -> np.ndarray:
        dims = np.asarray(dims)
        h = H_DIV * np.maximum(1.0, np.abs(x[..., dims]))  # (..., k)
        basis = np.zeros((dims.size, self.state_dim))
        basis[np.arange(dims.size), dims] = 1.0
        pert = h[..., :, None] * basis  # (..., k, state_dim)
        fp = self.f(x[..., None, :] + pert, u[..., None, :])
        fm = self.f(x[..., None, :] - pert, u[..., None, :])
        diag_p = fp[..., np.arange(dims.size), dims]
        diag_m = fm[..., np.arange(dims.size), dims]
        return ((diag_p - diag_m) / (2.0 * h)).sum(axis=-1)

    def _check_args(self, x, u):
        x = np.asarray(x, dtype=float)
        u = np.asarray(u, dtype=float)
        if x.shape[-1:] != (self.state_dim,):
            raise UsageError(
                f"{self.name}: state has trailing dim {x.shape[-1:]}, "
                f"expected {self.state_dim}")
        if u.shape[-1:] != (self.input_dim,):
            raise UsageError(
                f"{self.name}: input has trailing dim {u.shape[-1:]}, "
                f"expected {self.input_dim}")
        if not (np.isfinite(x).all() and np.isfinite(u).all()):
            raise NumericInputError(f"{self.name}: non-finite state or input")
        return x, u


def euler_step(model: DynamicsModel, x, u, dt: float) -> np.ndarray:
    """One explicit Euler step x + dt * f(x, u)."""
    return x + dt * model.f(x, u)


def rk4_step(model: DynamicsModel, x, u, dt: float) -> np.ndarray:
    """One classical 4-stage Runge-Kutta step with zero-order-hold input."""
    k1 = model.f(x, u)
    k2 = model.f(x + 0.5 * dt * k1, u)
    k3 = model.f(x + 0.5 * dt * k2, u)
    k4 = model.f(x + dt * k3, u)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def discretize(model: DynamicsModel, x, u, dt: float, scheme: str = "euler"):
    """Advance the state by dt using the requested integration scheme."""
    if not dt > 0:
        raise UsageError(f"dt must be positive, got {dt}")
    x, u = model._check_args(x, u)
    if scheme == "euler":
        return euler_step(model, x, u, dt)
    if scheme == "rk4":
        return rk4_step(model, x, u, dt)
    raise UsageError(f"unknown scheme {scheme!r}, expected 'euler' or 'rk4'")


class UnicycleModel(DynamicsModel):
    """Planar unicycle: states [x, y, v, theta], inputs [a, omega].

    xdot = v cos(theta), ydot = v sin(theta), vdot = a, thetadot = omega.
    The state divergence is identically zero (no state enters its own rate).
    """

    name = "unicycle"
    state_dim = 4
    input_dim = 2
    position_dim = 2
    state_labels = ("x", "y", "v", "theta")
    input_labels = ("a", "omega")

    def __init__(self):
        self.input_bounds = np.array([[-5.0, 5.0], [-np.pi, np.pi]])

    def f(self, x, u):
        v, th = x[..., 2], x[..., 3]
        return np.stack(
            [v * np.cos(th), v * np.sin(th), u[..., 0], u[..., 1]], axis=-1)

    def divergence(self, x, u):
        x, u = self._check_args(x, u)
        return np.zeros(x.shape[:-1])


class SingleIntegrator2D(DynamicsModel):
    """Planar single integrator: states [x, y], inputs [vx, vy]."""

    name = "single_integrator_2d"
    state_dim = 2
    input_dim = 2
    position_dim = 2
    state_labels = ("x", "y")
    input_labels = ("vx", "vy")

    def __init__(self):
        self.input_bounds = np.array([[-10.0, 10.0], [-10.0, 10.0]])

    def f(self, x, u):
        return np.broadcast_to(u, np.broadcast_shapes(x.shape, u.shape)).copy()

    def divergence(self, x, u):
        x, u = self._check_args(x, u)
        return np.zeros(x.shape[:-1])


class AuvModel(DynamicsModel):
    """Fully actuated 4-DOF underwater vehicle (surge, sway, heave, yaw).

    States are eta = [x, y, z, psi] and their world-frame rates etadot;
    inputs are commanded generalized accelerations in the eta frame, so the
    dynamics read etaddot = f_drift(x) + u.  The drift term collects rigid
    body + added-mass inertia, Coriolis coupling, linear + quadratic drag and
    the net gravity/buoyancy force, all evaluated in the body frame and
    mapped through the yaw rotation.  `tau_from_input` recovers the
    body-frame generalized forces realizing a commanded acceleration.
    """

    name = "auv"
    state_dim = 8
    input_dim = 4
    position_dim = 3
    state_labels = ("x", "y", "z", "psi", "dx", "dy", "dz", "dpsi")
    input_labels = ("acc_x", "acc_y", "acc_z", "acc_psi")

    # rigid-body and hydrodynamic parameters
    m = 54.54          # total mass, kg
    Iz = 13.587        # yaw inertia, kg m^2
    X_udot = -7.6e-3   # added mass
    Y_vdot = -5.5e-2
    Z_wdot = -2.4e-1
    N_rdot = -3.4e-3
    X_u = 2e-3         # linear damping
    Y_v = -1e-1
    Z_w = -3e-1
    N_r = 0.0          # linear yaw damping (not separately specified)
    X_uu = 2.3e-2      # quadratic damping
    Y_vv = 5.3e-2
    Z_ww = 1.7e-1
    N_rr = 2.9e-3
    G = 535.0          # gravity force, N
    B = 53.4           # buoyancy force, N

    def __init__(self):
        self.input_bounds = np.array([[-500.0, 500.0]] * 4)
        # diagonal inertia matrix including added mass
        self._m_diag = np.array([
            self.m - self.X_udot,
            self.m - self.Y_vdot,
            self.m - self.Z_wdot,
            self.Iz - self.N_rdot,
        ])
        self._g_vec = np.array([0.0, 0.0, -(self.G - self.B), 0.0])

    def inertia_matrix(self) -> np.ndarray:
        return np.diag(self._m_diag)

    def coriolis_matrix(self, v_body: np.ndarray) -> np.ndarray:
        """C(v) for a single body-frame velocity vector [u, v, w, r]."""
        ub, vb = v_body[0], v_body[1]
        mu = self.m - self.X_udot
        mv = self.m - self.Y_vdot
        C = np.zeros((4, 4))
        C[0, 3] = -mv * vb
        C[1, 3] = mu * ub
        C[3, 0] = mv * vb
        C[3, 1] = -mu * ub
        return C

    def damping_matrix(self, v_body: np.ndarray) -> np.ndarray:
        """D(v) for a single body-frame velocity vector."""
        ub, vb, wb, rb = v_body
        return -np.diag([
            self.X_u + self.X_uu * abs(ub),
            self.Y_v + self.Y_vv * abs(vb),
            self.Z_w + self.Z_ww * abs(wb),
            self.N_r + self.N_rr * abs(rb),
        ])

    def rotation(self, psi: np.ndarray) -> np.ndarray:
        """World-from-body transform J(eta), shape (..., 4, 4)."""
        psi = np.asarray(psi, dtype=float)
        c, s = np.cos(psi), np.sin(psi)
        J = np.zeros(psi.shape + (4, 4))
        J[..., 0, 0] = c
        J[..., 0, 1] = -s
        J[..., 1, 0] = s
        J[..., 1, 1] = c
        J[..., 2, 2] = 1.0
        J[..., 3, 3] = 1.0
        return J

    def f(self, x, u):
        psi = x[..., 3]
        dx, dy, dz, dpsi = x[..., 4], x[..., 5], x[..., 6], x[..., 7]
        c, s = np.cos(psi), np.sin(psi)

        # body-frame velocities v = J^{-1}(eta) etadot  (J^{-1} = J^T)
        ub = c * dx + s * dy
        vb = -s * dx + c * dy
        wb = dz
        rb = dpsi

        mu, mv, mw, mr = self._m_diag
        # C(v) v
        cu = -mv * vb * rb
        cv = mu * ub * rb
        cr = (mv - mu) * vb * ub
        # D(v) v  (note D carries an overall minus sign)
        du = -(self.X_u + self.X_uu * np.abs(ub)) * ub
        dv = -(self.Y_v + self.Y_vv * np.abs(vb)) * vb
        dw = -(self.Z_w + self.Z_ww * np.abs(wb)) * wb
        dr = -(self.N_r + self.N_rr * np.abs(rb)) * rb

        # body-frame accelerations M^{-1} (-C v - D v - J^T g); J^T g = g
        ab_u = (-cu - du) / mu
        ab_v = (-cv - dv) / mv
        ab_w = (-dw - self._g_vec[2]) / mw
        ab_r = (-cr - dr) / mr

        # etaddot = Jdot v + J a_body;  Jdot = dJ/dpsi * psidot
        acc_x = rb * (-s * ub - c * vb) + c * ab_u - s * ab_v
        acc_y = rb * (c * ub - s * vb) + s * ab_u + c * ab_v
        acc_z = ab_w
        acc_psi = ab_r

        drift = np.stack([acc_x, acc_y, acc_z, acc_psi], axis=-1)
        vel = x[..., 4:]
        return np.concatenate([vel, drift + u], axis=-1)

    def divergence(self, x, u):
        # position-rate block has zero self-dependence (f_i = x_{4+i});
        # only the acceleration block depends on its own rates
        x, u = self._check_args(x, u)
        return self._fd_divergence(x, u, np.arange(4, 8))

    def tau_from_input(self, x, u) -> np.ndarray:
        """Body-frame generalized forces whose net effect is the commanded
        acceleration contribution u, i.e. tau = M J^{-1}(eta) u."""
        x, u = self._check_args(x, u)
        psi = x[..., 3]
        c, s = np.cos(psi), np.sin(psi)
        ub = c * u[..., 0] + s * u[..., 1]
        vb = -s * u[..., 0] + c * u[..., 1]
        body = np.stack([ub, vb, u[..., 2], u[..., 3]], axis=-1)
        return body * self._m_diag


_MODELS = {
    "unicycle": UnicycleModel,
    "auv": AuvModel,
    "single_integrator_2d": SingleIntegrator2D,
}


def get_model(name: str) -> DynamicsModel:
    """Instantiate a model by its scenario-file name."""
    try:
        cls = _MODELS[name]
    except KeyError:
        raise UsageError(
            f"unknown model {name!r}; available: {sorted(_MODELS)}") from None
    return cls()
