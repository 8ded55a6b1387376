"""Finite-dimensional Lie-Poisson dynamics on tuples of so(3)* momenta.

The realization puts one three-vector l^mu on each extension index; with a
quadratic Hamiltonian H = 1/2 sum l^mu . A_{mu nu} l^nu the equations of
motion are

    dl^a/dt = sum_{lam, nu} W_lam^{a nu} (dH/dl^nu) x l^lam,

the sign fixed so that a single field with diagonal inertia reproduces
Euler's rigid-body equations dl1/dt = (1/I2 - 1/I3) l2 l3 (and cyclic).

Every symmetric matrix Q from the quadratic Casimir solver lifts to a
conserved monitor C_Q = 1/2 sum Q_{mu nu} <l^mu, l^nu>: its time derivative
contracts the symmetric Q-Hessian against the bracket antisymmetry and
vanishes identically, which the tests check to round-off.  Trajectories are
integrated with classical fixed-step RK4, so conservation shows up as
drift at the integrator's order, not exactness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .extension import ExtensionTensor


class DynamicsError(Exception):
    pass


class NonFinite(DynamicsError):
    """The trajectory left the representable floating-point range."""


@dataclass
class FieldState:
    """An n-tuple of so(3)* momenta and the current time."""

    tuples: np.ndarray      # shape (n, 3)
    time: float = 0.0

    @staticmethod
    def from_vectors(vectors: Sequence[Sequence[float]], time: float = 0.0) -> "FieldState":
        arr = np.asarray(vectors, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise DynamicsError("state must be a list of 3-vectors")
        return FieldState(arr, time)


@dataclass
class HamiltonianSpec:
    """Quadratic form with one 3x3 block per index pair, symmetric overall."""

    blocks: np.ndarray      # shape (n, n, 3, 3)

    def __post_init__(self):
        b = np.asarray(self.blocks, dtype=float)
        if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2:] != (3, 3):
            raise DynamicsError("blocks must have shape (n, n, 3, 3)")
        if not np.allclose(b, np.swapaxes(np.swapaxes(b, 0, 1), 2, 3)):
            raise DynamicsError("blocks must satisfy A[mu,nu] = A[nu,mu]^T")
        self.blocks = b

    @property
    def n(self) -> int:
        return self.blocks.shape[0]

    @staticmethod
    def rigid_body(inertia: Sequence[float]) -> "HamiltonianSpec":
        i1, i2, i3 = inertia
        block = np.diag([1.0 / i1, 1.0 / i2, 1.0 / i3])
        return HamiltonianSpec(block.reshape(1, 1, 3, 3))

    @staticmethod
    def isotropic(n: int) -> "HamiltonianSpec":
        """H = 1/2 sum |l^mu|^2."""
        blocks = np.zeros((n, n, 3, 3))
        for mu in range(n):
            blocks[mu, mu] = np.eye(3)
        return HamiltonianSpec(blocks)

    def gradient(self, state: np.ndarray) -> np.ndarray:
        return np.einsum("mnij,nj->mi", self.blocks, state)

    def value(self, state: np.ndarray) -> float:
        return 0.5 * float(np.einsum("mi,mnij,nj->", state, self.blocks, state))


def _tensor_triples(t: ExtensionTensor) -> List[Tuple[int, int, int, float]]:
    """Nonzero entries (lam, a, nu, w) of the tensor as floats."""
    out = []
    for lam in range(t.n):
        for a in range(t.n):
            for nu in range(t.n):
                w = t.entry(lam, a, nu)
                if w:
                    if w.im:
                        raise DynamicsError("dynamics needs a real tensor")
                    out.append((lam, a, nu, float(w.re)))
    return out


def eom_rhs(t: ExtensionTensor, h: HamiltonianSpec, s: FieldState) -> np.ndarray:
    """Right-hand side dl^a/dt = sum W_lam^{a nu} (dH/dl^nu) x l^lam."""
    if h.n != t.n or s.tuples.shape[0] != t.n:
        raise DynamicsError(
            f"dimension mismatch: tensor {t.n}, Hamiltonian {h.n}, state {s.tuples.shape[0]}"
        )
    grad = h.gradient(s.tuples)
    out = np.zeros_like(s.tuples)
    for lam, a, nu, w in _tensor_triples(t):
        out[a] += w * np.cross(grad[nu], s.tuples[lam])
    return out


def quadratic_monitor(q: np.ndarray):
    """C_Q = 1/2 sum Q_{mu nu} <l^mu, l^nu> as a callable on states."""
    q = np.asarray(q, dtype=float)

    def value(state: np.ndarray) -> float:
        return 0.5 * float(np.einsum("mn,mi,ni->", q, state, state))

    return value


def monitor_gradient(q: np.ndarray, state: np.ndarray) -> np.ndarray:
    return np.einsum("mn,ni->mi", np.asarray(q, dtype=float), state)


def exact_monitors(t: ExtensionTensor) -> List[Tuple[str, np.ndarray]]:
    """Monitors from the quadratic Casimir basis, as real float matrices.

    Complex basis elements (possible over Q(i)) are split into their real
    and imaginary symmetric parts, each monitored separately.
    """
    from .casimir import quadratic_casimir_basis

    out = []
    for k, q in enumerate(quadratic_casimir_basis(t)):
        re = np.array([[float(q[i, j].re) for j in range(t.n)] for i in range(t.n)])
        im = np.array([[float(q[i, j].im) for j in range(t.n)] for i in range(t.n)])
        if np.any(re):
            out.append((f"Q{k}", re))
        if np.any(im):
            out.append((f"Q{k}_im", im))
    return out


@dataclass
class TrajectoryRecord:
    times: np.ndarray
    states: np.ndarray                  # shape (samples, n, 3)
    monitors: Dict[str, np.ndarray]     # per-monitor sampled values
    drifts: Dict[str, float]            # relative drift over the run

    def to_csv(self, path: str) -> None:
        names = sorted(self.monitors)
        n = self.states.shape[1]
        header = ["time"]
        for mu in range(n):
            header += [f"l{mu}_{ax}" for ax in "xyz"]
        header += names
        rows = []
        for k, tval in enumerate(self.times):
            row = [f"{tval:.12g}"]
            row += [f"{x:.17g}" for x in self.states[k].reshape(-1)]
            row += [f"{self.monitors[name][k]:.17g}" for name in names]
            rows.append(",".join(row))
        with open(path, "w") as fh:
            fh.write(",".join(header) + "\n")
            fh.write("\n".join(rows) + "\n")


DRIFT_FLOOR = 1e-300


def simulate(
    t: ExtensionTensor,
    h: HamiltonianSpec,
    s0: FieldState,
    dt: float,
    steps: int,
    monitors: Optional[Sequence[Tuple[str, np.ndarray]]] = None,
    sample_every: int = 1,
) -> TrajectoryRecord:
    """Fixed-step RK4 integration with energy and Casimir drift monitoring.

    The drift of each monitor is |C(T) - C(0)| / max(|C(0)|, eps); the
    Hamiltonian itself is always monitored under the name "H".
    """
    if dt <= 0:
        raise DynamicsError("dt must be positive")
    if h.n != t.n or s0.tuples.shape[0] != t.n:
        raise DynamicsError("dimension mismatch between tensor, Hamiltonian, and state")
    triples = _tensor_triples(t)
    blocks = h.blocks

    def rhs(state):
        grad = np.einsum("mnij,nj->mi", blocks, state)
        out = np.zeros_like(state)
        for lam, a, nu, w in triples:
            out[a] += w * np.cross(grad[nu], state[lam])
        return out

    mons = [("H", None)] + list(monitors or [])
    values: Dict[str, List[float]] = {name: [] for name, _ in mons}

    def record(state):
        for name, q in mons:
            if q is None:
                values[name].append(h.value(state))
            else:
                values[name].append(0.5 * float(np.einsum("mn,mi,ni->", q, state, state)))

    state = s0.tuples.astype(float).copy()
    times = [s0.time]
    samples = [state.copy()]
    record(state)
    for k in range(steps):
        k1 = rhs(state)
        k2 = rhs(state + 0.5 * dt * k1)
        k3 = rhs(state + 0.5 * dt * k2)
        k4 = rhs(state + dt * k3)
        state = state + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(state)):
            raise NonFinite(f"state became non-finite at step {k + 1}")
        if (k + 1) % sample_every == 0 or k + 1 == steps:
            times.append(s0.time + (k + 1) * dt)
            samples.append(state.copy())
            record(state)
    drifts = {}
    for name in values:
        series = values[name]
        scale = max(abs(series[0]), DRIFT_FLOOR)
        drifts[name] = abs(series[-1] - series[0]) / scale
    return TrajectoryRecord(
        np.array(times),
        np.array(samples),
        {name: np.array(vals) for name, vals in values.items()},
        drifts,
    )


def analytic_conservation_residual(
    t: ExtensionTensor, h: HamiltonianSpec, q: np.ndarray, state: np.ndarray
) -> float:
    """|<grad C_Q, dl/dt>| / scale at one state; zero up to round-off.

    This is the statement that transfers exactly from the symmetry
    condition in the constant-Hessian case: the cross product kills the
    symmetric contraction.
    """
    rhs = eom_rhs(t, h, FieldState(state))
    grad = monitor_gradient(q, state)
    raw = float(np.einsum("mi,mi->", grad, rhs))
    scale = max(float(np.linalg.norm(grad) * np.linalg.norm(rhs)), 1e-30)
    return abs(raw) / scale


def heavy_top_tensor() -> ExtensionTensor:
    """The two-field semidirect tensor of the heavy-top analog."""
    from .extension import leibniz

    return leibniz(1, semidirect=True)


def rigid_body_tensor() -> ExtensionTensor:
    """The bare base bracket: one field, identity slice."""
    from .extension import pure_semidirect

    return pure_semidirect(0)
