"""Reference ontological models for qubit fragments.

Three constructions span the classification landscape: the hemisphere-cap
qubit model (eigenstate-supported but not mixture-only, reproducing Born
statistics up to quadrature error), the trivial model whose atoms are the
catalogued quantum states themselves (neither condition holds once a
superposition is catalogued), and a value-definite extension that carries a
macro value on every atom while escaping the eigenstate supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .ontomodel import SUPPORT_EPS, FiniteOntModel, QuantumFragment
from .quantum import (
    ProjMeasurement,
    StateVector,
    UnitaryMap,
    basis_measurement,
    born,
)

GRID_WEIGHT_TOL = 1e-6
PAULI = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes on the unit sphere with positive weights."""

    nodes: np.ndarray     # (n, 3) unit vectors
    weights: np.ndarray   # (n,) positive, summing to 4*pi

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=float).copy()
        weights = np.asarray(self.weights, dtype=float).copy()
        if nodes.ndim != 2 or nodes.shape[1] != 3:
            raise ValueError(f"nodes must be (n, 3), got {nodes.shape}")
        if weights.shape != (nodes.shape[0],):
            raise ValueError("one weight per node required")
        norms = np.linalg.norm(nodes, axis=1)
        if np.abs(norms - 1.0).max(initial=0.0) > 1e-12:
            raise ValueError("nodes must be unit vectors")
        if weights.min(initial=1.0) <= 0.0:
            raise ValueError("weights must be positive")
        if abs(weights.sum() - 4.0 * math.pi) > GRID_WEIGHT_TOL:
            raise ValueError(f"weights sum to {weights.sum()!r}, expected 4*pi")
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def node_count(self) -> int:
        return self.nodes.shape[0]


def fibonacci_sphere_grid(n: int) -> SphereGrid:
    """Golden-angle spiral with equal weights 4*pi/n.

    The z-offsets (2k+1)/n keep every node strictly off the equator for even
    n, which keeps hemisphere supports clean.
    """
    if n < 4:
        raise ValueError("need at least 4 nodes")
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    azimuth = 2.0 * math.pi * k / golden
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    nodes = np.column_stack([r * np.cos(azimuth), r * np.sin(azimuth), z])
    weights = np.full(n, 4.0 * math.pi / n)
    return SphereGrid(nodes, weights)


# -- Bloch helpers ----------------------------------------------------------

def bloch_vector(state: StateVector) -> np.ndarray:
    """Bloch 3-vector of a qubit state."""
    if state.dim != 2:
        raise ValueError("bloch_vector expects a qubit state")
    amp = state.amplitudes
    rho = np.outer(amp, amp.conj())
    return np.real(np.einsum("kij,ji->k", PAULI, rho))


def state_from_bloch(direction) -> StateVector:
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    theta = math.acos(np.clip(n[2], -1.0, 1.0))
    phi = math.atan2(n[1], n[0])
    return StateVector(
        np.array([math.cos(theta / 2.0), np.exp(1j * phi) * math.sin(theta / 2.0)])
    )


def measurement_from_direction(direction, labels=("+", "-")) -> ProjMeasurement:
    plus = state_from_bloch(direction)
    minus = state_from_bloch(-np.asarray(direction, dtype=float))
    return basis_measurement([plus, minus], labels)


def rotation_of_unitary(u: UnitaryMap) -> np.ndarray:
    """SO(3) action of a qubit unitary on Bloch vectors."""
    if u.dim != 2:
        raise ValueError("rotation_of_unitary expects a qubit unitary")
    m = u.matrix
    return 0.5 * np.real(
        np.einsum("iab,bc,jcd,da->ij", PAULI, m, PAULI, m.conj().T)
    )


def rotation_unitary(axis, angle: float) -> UnitaryMap:
    """Qubit unitary rotating Bloch vectors by ``angle`` about ``axis``."""
    n = np.asarray(axis, dtype=float)
    n = n / np.linalg.norm(n)
    gen = n[0] * PAULI[0] + n[1] * PAULI[1] + n[2] * PAULI[2]
    mat = math.cos(angle / 2.0) * np.eye(2) - 1j * math.sin(angle / 2.0) * gen
    return UnitaryMap(mat)


def _measurement_direction(meas: ProjMeasurement) -> np.ndarray:
    """Bloch direction of the first outcome of a dichotomic qubit measurement."""
    if meas.dim != 2 or meas.n_outcomes != 2:
        raise ValueError("expected a two-outcome qubit measurement")
    p = meas.projectors[0]
    direction = np.real(np.einsum("kij,ji->k", PAULI, p))
    norm = np.linalg.norm(direction)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError("outcome projector is not rank one")
    return direction / norm


# -- fragment builders ------------------------------------------------------

def qubit_fragment(
    state_directions: dict,
    measurement_directions: dict,
    rotations: dict | None = None,
    macro_name: str = "macro",
) -> QuantumFragment:
    """Qubit fragment from named Bloch directions.

    ``measurement_directions`` must include ``macro_name``. Each rotation is
    an (axis, angle) pair; the listed states are not automatically closed
    under them, callers add images they intend to query.
    """
    if macro_name not in measurement_directions:
        raise ValueError(f"measurement_directions must include {macro_name!r}")
    states = {name: state_from_bloch(d) for name, d in state_directions.items()}
    measurements = {}
    for name, d in measurement_directions.items():
        labels = ("q+", "q-") if name == macro_name else ("+", "-")
        measurements[name] = measurement_from_direction(d, labels)
    unitaries = {}
    for name, (axis, angle) in (rotations or {}).items():
        unitaries[name] = rotation_unitary(axis, angle)
    return QuantumFragment(2, states, unitaries, measurements, macro_name)


def orbit_closed_directions(seeds: dict, rotation: np.ndarray, max_states: int = 256) -> dict:
    """Close a set of named Bloch directions under a rotation.

    Images of catalogued directions get derived names; directions already
    present (dot within 1e-12 of 1) are not duplicated. Raises if the orbit
    does not close within ``max_states`` members, as happens for rotation
    angles incommensurate with pi.
    """
    dirs = {name: np.asarray(d, dtype=float) / np.linalg.norm(d) for name, d in seeds.items()}
    frontier = list(dirs.items())
    while frontier:
        name, d = frontier.pop(0)
        image = rotation @ d
        if any(image @ v > 1.0 - 1e-12 for v in dirs.values()):
            continue
        if len(dirs) >= max_states:
            raise ValueError("rotation orbit does not close; choose a commensurate angle")
        new_name = f"rot:{name}"
        dirs[new_name] = image
        frontier.append((new_name, image))
    return {name: tuple(d) for name, d in dirs.items()}


def standard_qubit_fragment(theta: float = math.pi / 3) -> QuantumFragment:
    """Small spread-out fragment used by the property suite: macro z-axis,
    oblique and equatorial states, one rotation by ``theta`` about y, with
    the catalogue closed under the rotation's orbit."""
    s3 = math.sin(theta)
    c3 = math.cos(theta)
    # both macro eigenstates are seeded so classification can run
    seeds = {
        "up": (0.0, 0.0, 1.0),
        "down": (0.0, 0.0, -1.0),
        "plus_x": (1.0, 0.0, 0.0),
        "skew": (0.6, 0.48, 0.64),
    }
    rot = np.array([[c3, 0.0, s3], [0.0, 1.0, 0.0], [-s3, 0.0, c3]])
    state_dirs = orbit_closed_directions(seeds, rot)
    meas_dirs = {
        "macro": (0.0, 0.0, 1.0),
        "mx": (1.0, 0.0, 0.0),
        "oblique_axis": (s3, 0.0, c3),
    }
    return qubit_fragment(state_dirs, meas_dirs, {"step": ((0.0, 1.0, 0.0), theta)})


def paired_validation_grid(n_pairs: int = 50, offset: int = 13):
    """Deterministic (state, measurement) direction pairs for fidelity checks.

    Both direction families come from one golden-angle set of 2*n_pairs
    directions; pair i uses member 2i for the state and member (2i+offset)
    mod 2*n_pairs for the measurement, spreading relative angles without
    sharing axes.
    """
    total = 2 * n_pairs
    k = np.arange(total)
    z = 1.0 - 2.0 * (k + 0.5) / total
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    azimuth = 2.0 * math.pi * k / golden
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    dirs = np.column_stack([r * np.cos(azimuth), r * np.sin(azimuth), z])
    states = dirs[2 * np.arange(n_pairs) % total]
    meas = dirs[(2 * np.arange(n_pairs) + offset) % total]
    return states, meas


# -- the three reference models ---------------------------------------------

def kochen_specker_model(grid: SphereGrid, fragment: QuantumFragment) -> FiniteOntModel:
    """Hemisphere-cap qubit model on a sphere grid.

    Atoms are grid nodes. A state with Bloch vector n gets weight
    max(0, n.node) * node_weight, normalized; a measurement along m answers
    its first outcome exactly when m.node >= 0. Unitaries become node
    permutations by rotate-then-snap-to-nearest. Measurements re-prepare the
    cap of the observed outcome.
    """
    if fragment.dim != 2:
        raise ValueError("the cap model is a qubit construction")
    nodes = grid.nodes
    n_atoms = grid.node_count

    def cap_weights(direction: np.ndarray) -> np.ndarray:
        w = np.maximum(0.0, nodes @ direction) * grid.weights
        total = w.sum()
        if total <= 0.0:
            raise ValueError("degenerate cap: no grid node in the open hemisphere")
        return w / total

    preparations = {}
    delta_sets = {}
    for name, state in fragment.states.items():
        preparations[name] = cap_weights(bloch_vector(state))
        delta_sets[name] = (name,)

    responses = {}
    outcome_labels = {}
    meas_dirs = {}
    for mname, meas in fragment.measurements.items():
        direction = _measurement_direction(meas)
        meas_dirs[mname] = direction
        first = (nodes @ direction >= 0.0).astype(float)
        responses[mname] = np.vstack([first, 1.0 - first])
        outcome_labels[mname] = meas.outcomes

    updates = {}
    for mname, meas in fragment.measurements.items():
        table = {}
        for k, label in enumerate(meas.outcomes):
            direction = meas_dirs[mname] if k == 0 else -meas_dirs[mname]
            pname = f"cap:{mname}:{label}"
            if pname not in preparations:
                preparations[pname] = cap_weights(direction)
            table[label] = pname
        updates[mname] = table

    macro = fragment.macro_observable
    eigenstate_preps = {}
    for k, q in enumerate(fragment.macro.outcomes):
        direction = meas_dirs[macro] if k == 0 else -meas_dirs[macro]
        names = [f"cap:{macro}:{q}"]
        for sname, state in fragment.states.items():
            if bloch_vector(state) @ direction > 1.0 - 1e-12:
                names.append(sname)
        eigenstate_preps[q] = tuple(names)

    maps = {}
    if fragment.unitaries:
        tree = cKDTree(nodes)
        for uname, u in fragment.unitaries.items():
            rot = rotation_of_unitary(u)
            maps[uname] = tree.query(nodes @ rot.T)[1].astype(int)

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses=responses,
        outcome_labels=outcome_labels,
        macro_measurement=macro,
        eigenstate_preps=eigenstate_preps,
        maps=maps,
        updates=updates,
        delta_sets=delta_sets,
    )


def beltrametti_bugajski_model(fragment: QuantumFragment) -> FiniteOntModel:
    """One atom per catalogued state; responses are Born probabilities.

    Exact by construction for any fragment. The macro eigenstate
    declarations cover the catalogued states lying on macro rays; if some
    macro value has no catalogued eigenstate the declaration stays empty
    and classification refuses to run.
    """
    names = list(fragment.states)
    index = {name: i for i, name in enumerate(names)}
    n_atoms = len(names)
    eye = np.eye(n_atoms)

    preparations = {name: eye[i] for name, i in index.items()}
    delta_sets = {name: (name,) for name in names}

    responses = {}
    outcome_labels = {}
    for mname, meas in fragment.measurements.items():
        cols = [born(fragment.states[s], meas) for s in names]
        responses[mname] = np.column_stack(cols)
        outcome_labels[mname] = meas.outcomes

    macro = fragment.macro
    eigenstate_preps = {}
    for k, q in enumerate(macro.outcomes):
        members = []
        proj = macro.projectors[k]
        for sname in names:
            amp = fragment.states[sname].amplitudes
            if abs((amp.conj() @ proj @ amp).real - 1.0) <= 1e-12:
                members.append(sname)
        if members:
            eigenstate_preps[q] = tuple(members)

    maps = {}
    for uname, u in fragment.unitaries.items():
        targets = []
        for sname in names:
            image_amp = u.matrix @ fragment.states[sname].amplitudes
            image = StateVector.normalized(image_amp)
            hit = None
            for tname in names:
                if image.same_ray(fragment.states[tname], tol=1e-10):
                    hit = index[tname]
                    break
            if hit is None:
                raise ValueError(
                    f"catalogue not closed: {uname!r} image of {sname!r} is uncatalogued"
                )
            targets.append(hit)
        maps[uname] = np.asarray(targets, dtype=int)

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses=responses,
        outcome_labels=outcome_labels,
        macro_measurement=fragment.macro_observable,
        eigenstate_preps=eigenstate_preps,
        maps=maps,
        delta_sets=delta_sets,
    )


def deterministic_extension_model(fragment: QuantumFragment) -> FiniteOntModel:
    """Value-definite toy: atoms are (state, macro value) pairs.

    Only the macro measurement may be catalogued. Each state's preparation
    spreads over its own atoms with Born weights, every atom answers its
    fixed macro value, and no atom is shared between states, so weight
    escapes the eigenstate supports whenever a superposition is catalogued.
    """
    extra = [m for m in fragment.measurements if m != fragment.macro_observable]
    if extra:
        raise ValueError(
            f"the value-definite extension handles the macro measurement only; "
            f"fragment also carries {extra!r}"
        )
    macro = fragment.macro
    q_labels = macro.outcomes
    atoms = []
    for sname, state in fragment.states.items():
        probs = born(state, macro)
        for k, q in enumerate(q_labels):
            if probs[k] > SUPPORT_EPS:
                atoms.append((sname, k, probs[k]))
    n_atoms = len(atoms)

    preparations = {}
    for sname in fragment.states:
        w = np.zeros(n_atoms)
        for i, (owner, _, p) in enumerate(atoms):
            if owner == sname:
                w[i] = p
        preparations[sname] = w / w.sum()
    delta_sets = {name: (name,) for name in fragment.states}

    resp = np.zeros((len(q_labels), n_atoms))
    for i, (_, k, _) in enumerate(atoms):
        resp[k, i] = 1.0

    eigenstate_preps = {}
    for k, q in enumerate(q_labels):
        members = []
        for sname, state in fragment.states.items():
            amp = state.amplitudes
            if abs((amp.conj() @ macro.projectors[k] @ amp).real - 1.0) <= 1e-12:
                members.append(sname)
        if members:
            eigenstate_preps[q] = tuple(members)

    updates = {fragment.macro_observable: {}}
    for k, q in enumerate(q_labels):
        if q in eigenstate_preps:
            updates[fragment.macro_observable][q] = eigenstate_preps[q][0]
    if not updates[fragment.macro_observable]:
        updates = {}

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses={fragment.macro_observable: resp},
        outcome_labels={fragment.macro_observable: q_labels},
        macro_measurement=fragment.macro_observable,
        eigenstate_preps=eigenstate_preps,
        updates=updates,
        delta_sets=delta_sets,
    )


def emmr_toy_model(theta: float) -> tuple:
    """Classical two-state mixture model with a doubly stochastic step map.

    Preparations are the two macro eigenstates and their uniform mixture;
    the step map flips with probability sin^2(theta/2), matching the qubit
    transition probabilities of a Bloch rotation by ``theta``; measurement
    updates re-prepare the observed eigenstate, which never disturbs any of
    the registered preparations. Returns (model, fragment); the fragment
    catalogues the macro measurement only.
    """
    c2 = math.cos(theta / 2.0) ** 2
    s2 = 1.0 - c2
    fragment = qubit_fragment(
        {"up": (0.0, 0.0, 1.0), "down": (0.0, 0.0, -1.0)},
        {"macro": (0.0, 0.0, 1.0)},
    )
    q_plus, q_minus = fragment.macro.outcomes
    model = FiniteOntModel(
        atoms=2,
        preparations={
            "eig_up": np.array([1.0, 0.0]),
            "eig_down": np.array([0.0, 1.0]),
            "mixed": np.array([0.5, 0.5]),
        },
        responses={"macro": np.eye(2)},
        outcome_labels={"macro": (q_plus, q_minus)},
        macro_measurement="macro",
        eigenstate_preps={q_plus: ("eig_up",), q_minus: ("eig_down",)},
        maps={"step": np.array([[c2, s2], [s2, c2]])},
        updates={"macro": {q_plus: "eig_up", q_minus: "eig_down"}},
        delta_sets={"up": ("eig_up",), "down": ("eig_down",)},
    )
    return model, fragment
