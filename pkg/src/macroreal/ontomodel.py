"""Finite ontological models over a discrete set of ontic atoms.

A model carries preparation measures (probability vectors over atoms),
stochastic maps, and per-measurement response matrices, together with the
bookkeeping a macro-realism analysis needs: which preparations count as
operational eigenstates of the designated macro observable, and which
preparations realize which quantum state (the delta sets). Queries are pure;
models are immutable, and registering a pushed-forward preparation returns a
new model.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import nnls

from .quantum import ProjMeasurement, StateVector, UnitaryMap, born

SUPPORT_EPS = 1e-12        # membership threshold for supports
KERNEL_EPS = 1e-9          # membership threshold for kernel sets
PROB_TOL = 1e-12           # stochasticity of preparations / maps / responses
EIGENPREP_TOL = 1e-10      # certainty requirement on declared eigenstate preps
DETERMINISM_TOL = 1e-10    # 0/1 response columns for the SSMR condition
MIXTURE_RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class QuantumFragment:
    """Finite catalogue of states, unitaries, and measurements with one
    designated macro observable."""

    dim: int
    states: dict
    unitaries: dict
    measurements: dict
    macro_observable: str

    def __post_init__(self) -> None:
        for name, s in self.states.items():
            if s.dim != self.dim:
                raise ValueError(f"state {name!r} has dim {s.dim}, fragment dim {self.dim}")
        for name, u in self.unitaries.items():
            if u.dim != self.dim:
                raise ValueError(f"unitary {name!r} has dim {u.dim}, fragment dim {self.dim}")
        for name, m in self.measurements.items():
            if m.dim != self.dim:
                raise ValueError(f"measurement {name!r} has dim {m.dim}, fragment dim {self.dim}")
        if self.macro_observable not in self.measurements:
            raise ValueError(f"macro observable {self.macro_observable!r} not in measurements")
        object.__setattr__(self, "states", dict(self.states))
        object.__setattr__(self, "unitaries", dict(self.unitaries))
        object.__setattr__(self, "measurements", dict(self.measurements))

    @property
    def macro(self) -> ProjMeasurement:
        return self.measurements[self.macro_observable]

    def born(self, state_name: str, meas_name: str) -> np.ndarray:
        return born(self.states[state_name], self.measurements[meas_name])


def _check_prob_vector(vec: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(vec, dtype=float).copy()
    if v.ndim != 1:
        raise ValueError(f"{what}: expected a vector, got shape {v.shape}")
    if v.min(initial=0.0) < -PROB_TOL:
        raise ValueError(f"{what}: negative entry {v.min()!r}")
    if abs(v.sum() - 1.0) > PROB_TOL:
        raise ValueError(f"{what}: sums to {v.sum()!r}")
    v.setflags(write=False)
    return v


def _check_map(mat, n: int, name: str) -> np.ndarray:
    arr = np.asarray(mat)
    if arr.ndim == 1:
        # deterministic map given as target indices per atom
        arr = arr.astype(int)
        if arr.shape != (n,) or arr.min(initial=0) < 0 or arr.max(initial=0) >= n:
            raise ValueError(f"map {name!r}: bad deterministic target array")
        arr = arr.copy()
    else:
        arr = arr.astype(float)
        if arr.shape != (n, n):
            raise ValueError(f"map {name!r}: expected shape ({n},{n}), got {arr.shape}")
        if arr.min(initial=0.0) < -PROB_TOL:
            raise ValueError(f"map {name!r}: negative entry")
        colsums = arr.sum(axis=0)
        if np.abs(colsums - 1.0).max(initial=0.0) > PROB_TOL:
            raise ValueError(f"map {name!r}: columns not stochastic")
        arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FiniteOntModel:
    """Ontic atoms 0..atoms-1 with preparations, maps, responses, and the
    macro-realism declarations.

    ``responses[m]`` has shape (outcomes, atoms) with stochastic columns;
    ``outcome_labels[m]`` names its rows. ``maps`` values are either dense
    column-stochastic matrices or integer target arrays (deterministic
    maps). ``eigenstate_preps`` maps each macro value to the preparation
    names declared as its operational eigenstates; ``delta_sets`` maps a
    state name to the preparations that realize it; ``updates`` maps a
    measurement and outcome label to the re-prepared preparation name.
    """

    atoms: int
    preparations: dict
    responses: dict
    outcome_labels: dict
    macro_measurement: str
    eigenstate_preps: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    updates: dict = field(default_factory=dict)
    delta_sets: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = self.atoms
        if n <= 0:
            raise ValueError("atom count must be positive")
        preparations = {
            name: _check_prob_vector(vec, f"preparation {name!r}")
            for name, vec in self.preparations.items()
        }
        responses = {}
        labels = {}
        for mname, resp in self.responses.items():
            arr = np.asarray(resp, dtype=float).copy()
            if arr.ndim != 2 or arr.shape[1] != n:
                raise ValueError(f"response {mname!r}: expected (outcomes, {n}), got {arr.shape}")
            if arr.min(initial=0.0) < -PROB_TOL:
                raise ValueError(f"response {mname!r}: negative entry")
            if np.abs(arr.sum(axis=0) - 1.0).max(initial=0.0) > PROB_TOL:
                raise ValueError(f"response {mname!r}: columns not stochastic")
            arr.setflags(write=False)
            responses[mname] = arr
            lab = self.outcome_labels.get(mname)
            if lab is None:
                lab = tuple(str(i) for i in range(arr.shape[0]))
            lab = tuple(str(x) for x in lab)
            if len(lab) != arr.shape[0]:
                raise ValueError(f"response {mname!r}: {len(lab)} labels for {arr.shape[0]} rows")
            labels[mname] = lab
        if self.macro_measurement not in responses:
            raise ValueError(f"macro measurement {self.macro_measurement!r} has no response matrix")
        maps = {name: _check_map(m, n, name) for name, m in self.maps.items()}

        macro_labels = labels[self.macro_measurement]
        eigen = {}
        for q, names in self.eigenstate_preps.items():
            q = str(q)
            if q not in macro_labels:
                raise ValueError(f"eigenstate declaration for unknown macro value {q!r}")
            names = tuple(names)
            if not names:
                raise ValueError(f"eigenstate declaration for {q!r} is empty")
            row = responses[self.macro_measurement][macro_labels.index(q)]
            for pname in names:
                if pname not in preparations:
                    raise ValueError(f"eigenstate preparation {pname!r} not registered")
                certainty = float(row @ preparations[pname])
                if certainty < 1.0 - EIGENPREP_TOL:
                    raise ValueError(
                        f"preparation {pname!r} yields {q!r} with probability "
                        f"{certainty!r}, not 1"
                    )
            eigen[q] = names
        updates = {}
        for mname, table in self.updates.items():
            if mname not in responses:
                raise ValueError(f"update rule for unknown measurement {mname!r}")
            table = {str(k): str(v) for k, v in table.items()}
            for out_label, pname in table.items():
                if out_label not in labels[mname]:
                    raise ValueError(f"update rule for unknown outcome {out_label!r} of {mname!r}")
                if pname not in preparations:
                    raise ValueError(f"update rule re-prepares unknown preparation {pname!r}")
            updates[mname] = table
        delta = {}
        for sname, names in self.delta_sets.items():
            names = tuple(names)
            for pname in names:
                if pname not in preparations:
                    raise ValueError(f"delta set of {sname!r} names unknown preparation {pname!r}")
            delta[str(sname)] = names

        object.__setattr__(self, "preparations", preparations)
        object.__setattr__(self, "responses", responses)
        object.__setattr__(self, "outcome_labels", labels)
        object.__setattr__(self, "maps", maps)
        object.__setattr__(self, "eigenstate_preps", eigen)
        object.__setattr__(self, "updates", updates)
        object.__setattr__(self, "delta_sets", delta)

    # -- resolution helpers -------------------------------------------------

    def preparation(self, name: str) -> np.ndarray:
        try:
            return self.preparations[name]
        except KeyError:
            raise ValueError(f"unknown preparation {name!r}") from None

    def response(self, name: str) -> np.ndarray:
        try:
            return self.responses[name]
        except KeyError:
            raise ValueError(f"unknown measurement {name!r}") from None

    def target_preparations(self, target: str) -> tuple:
        """Resolve an overlap target: a preparation name, a state with a
        declared delta set, or a macro value with declared eigenstates."""
        if target in self.preparations:
            return (target,)
        if target in self.delta_sets and self.delta_sets[target]:
            return self.delta_sets[target]
        if target in self.eigenstate_preps:
            return self.eigenstate_preps[target]
        raise ValueError(
            f"target {target!r} is neither a preparation nor a state with "
            "declared realizing preparations"
        )

    def with_preparation(
        self,
        name: str,
        weights: np.ndarray,
        *,
        eigenstate_of: str | None = None,
        delta_of: str | None = None,
    ) -> "FiniteOntModel":
        """New model with one more registered preparation (closure under
        transformations is realized by registering push-forward results)."""
        if name in self.preparations:
            raise ValueError(f"preparation {name!r} already registered")
        preps = dict(self.preparations)
        preps[name] = np.asarray(weights, dtype=float)
        eigen = {q: tuple(v) for q, v in self.eigenstate_preps.items()}
        if eigenstate_of is not None:
            eigen[eigenstate_of] = eigen.get(eigenstate_of, ()) + (name,)
        delta = {s: tuple(v) for s, v in self.delta_sets.items()}
        if delta_of is not None:
            delta[delta_of] = delta.get(delta_of, ()) + (name,)
        return replace(self, preparations=preps, eigenstate_preps=eigen, delta_sets=delta)


def support(weights: np.ndarray, eps: float = SUPPORT_EPS) -> np.ndarray:
    """Atom indices carrying more than ``eps`` weight."""
    return np.where(np.asarray(weights) > eps)[0]


def predict(model: FiniteOntModel, preparation: str, measurement: str) -> np.ndarray:
    """Outcome distribution: sum_atoms mu(atom) P(outcome | atom)."""
    mu = model.preparation(preparation)
    probs = model.response(measurement) @ mu
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"prediction sums to {total!r}")
    return np.clip(probs, 0.0, 1.0) / total


def push_forward(model: FiniteOntModel, preparation: str, map_name: str) -> np.ndarray:
    """Effective preparation after a stochastic map."""
    mu = model.preparation(preparation)
    try:
        gamma = model.maps[map_name]
    except KeyError:
        raise ValueError(f"unknown map {map_name!r}") from None
    if gamma.ndim == 1:
        out = np.bincount(gamma, weights=mu, minlength=model.atoms)
    else:
        out = gamma @ mu
    return out / out.sum()


def kernel_set(f: np.ndarray, mu: np.ndarray, eps: float = KERNEL_EPS) -> np.ndarray:
    """Atoms where the [0,1]-valued function f equals 1 within ``eps``.

    If sum mu*f = 1 then the returned set carries full mu-measure (the
    finite form of the unit-average kernel lemma); ``mu`` is part of the
    signature for that contract, the set itself depends only on ``f``.
    """
    f = np.asarray(f, dtype=float)
    if f.min(initial=0.0) < -1e-12 or f.max(initial=0.0) > 1.0 + 1e-12:
        raise ValueError("kernel_set expects entries in [0, 1]")
    np.asarray(mu)  # shape compatibility is the caller's concern past this point
    return np.where(1.0 - f <= eps)[0]


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Bindings:
    """Which model names realize which fragment names.

    ``pairs`` restricts the validated (preparation, measurement) grid;
    by default every bound preparation is checked against every bound
    measurement.
    """

    preparations: dict
    measurements: dict
    pairs: tuple | None = None

    def iter_pairs(self):
        if self.pairs is not None:
            for prep, meas in self.pairs:
                yield prep, meas
        else:
            for prep in self.preparations:
                for meas in self.measurements:
                    yield prep, meas


def default_bindings(model: FiniteOntModel, fragment: QuantumFragment) -> Bindings:
    """Identity bindings: shared measurement names, with preparations bound
    to states through the declared delta sets (same-named preparations bind
    to their states as a fallback)."""
    preps = {}
    for sname in fragment.states:
        for pname in model.delta_sets.get(sname, ()):
            preps[pname] = sname
        if sname in model.preparations:
            preps.setdefault(sname, sname)
    meas = {m: m for m in fragment.measurements if m in model.responses}
    return Bindings(preparations=preps, measurements=meas)


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    max_deviation: float
    tol: float
    worst_pair: tuple | None
    rows: tuple


def validate(
    model: FiniteOntModel,
    fragment: QuantumFragment,
    bindings: Bindings,
    tol: float,
) -> ValidationReport:
    """Compare model predictions with Born probabilities over bound pairs."""
    rows = []
    worst = (None, -1.0)
    for prep, meas in bindings.iter_pairs():
        if prep not in bindings.preparations:
            raise ValueError(f"pair references unbound preparation {prep!r}")
        if meas not in bindings.measurements:
            raise ValueError(f"pair references unbound measurement {meas!r}")
        state_name = bindings.preparations[prep]
        frag_meas = bindings.measurements[meas]
        expected = fragment.born(state_name, frag_meas)
        got = predict(model, prep, meas)
        if got.shape != expected.shape:
            raise ValueError(
                f"outcome count mismatch for pair ({prep!r}, {meas!r}): "
                f"{got.shape} vs {expected.shape}"
            )
        dev = float(np.abs(got - expected).max())
        rows.append((prep, meas, dev))
        if dev > worst[1]:
            worst = ((prep, meas), dev)
    if not rows:
        raise ValueError("bindings produce no pairs to validate")
    max_dev = worst[1]
    return ValidationReport(
        passed=max_dev <= tol,
        max_deviation=max_dev,
        tol=tol,
        worst_pair=worst[0],
        rows=tuple(rows),
    )


# -- asymmetric overlap -----------------------------------------------------

@dataclass(frozen=True)
class OverlapReport:
    """Overlap mass, the realizing atom set, and the resolved targets."""

    value: float
    realizing_set: tuple
    targets: tuple

    def __float__(self) -> float:
        return self.value


def asymmetric_overlap(
    model: FiniteOntModel, mu_name: str, targets: Iterable[str] | str
) -> OverlapReport:
    """Probability that a sample from ``mu`` lands in every full-measure set
    of every target.

    On a finite atom set the infimum is achieved by the union of the
    supports of all preparations realizing the targets, so the value is the
    mu-mass of that union.
    """
    if isinstance(targets, str):
        targets = (targets,)
    targets = tuple(targets)
    mu = model.preparation(mu_name)
    atom_mask = np.zeros(model.atoms, dtype=bool)
    for target in targets:
        for pname in model.target_preparations(target):
            atom_mask[support(model.preparation(pname))] = True
    realizing = np.where(atom_mask)[0]
    value = float(mu[realizing].sum())
    return OverlapReport(value, tuple(int(i) for i in realizing), targets)


# -- classification ---------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str             # EMMR | ESMR | SSMR | NONE
    evidence: dict


def classify(model: FiniteOntModel, fragment: QuantumFragment | None = None) -> Classification:
    """Decide which macro-realism category the model's declarations realize.

    Conditions, relative to the declared operational-eigenstate sets:
    (a) every preparation is supported inside the union A of eigenstate
    supports; (b) every preparation is a nonnegative mixture of declared
    eigenstate preparations; (c) every carried atom answers the macro
    measurement deterministically. EMMR = (a) and (b); ESMR = (a) without
    (b); SSMR = (c) with some preparation carrying weight outside A;
    anything else is NONE. The caller is expected to have validated the
    model against its fragment first.
    """
    macro = model.macro_measurement
    macro_labels = model.outcome_labels[macro]
    missing = [q for q in macro_labels if q not in model.eigenstate_preps]
    if fragment is not None:
        frag_labels = fragment.macro.outcomes
        if tuple(frag_labels) != tuple(macro_labels):
            raise ValueError(
                f"macro outcome labels {macro_labels!r} do not match fragment "
                f"macro outcomes {frag_labels!r}"
            )
    if missing:
        raise ValueError(f"no eigenstate preparations declared for macro values {missing!r}")

    eigen_names: list[str] = []
    for q in macro_labels:
        eigen_names.extend(model.eigenstate_preps[q])
    accessible = np.zeros(model.atoms, dtype=bool)
    for pname in eigen_names:
        accessible[support(model.preparation(pname))] = True

    evidence: dict = {"eigenstate_atoms": int(accessible.sum())}

    # (a) eigenstate support
    support_ok = True
    for pname, mu in model.preparations.items():
        outside = support(mu)[~accessible[support(mu)]]
        if outside.size:
            support_ok = False
            evidence["support_violation"] = {
                "preparation": pname,
                "atom": int(outside[0]),
                "weight": float(mu[outside[0]]),
            }
            break

    # (b) mixtures of declared eigenstate preparations
    eigen_matrix = np.column_stack([model.preparation(p) for p in eigen_names])
    mixture_ok = True
    worst_residual = 0.0
    for pname, mu in model.preparations.items():
        _, residual = nnls(eigen_matrix, mu)
        if residual > worst_residual:
            worst_residual = residual
            evidence["worst_mixture"] = {"preparation": pname, "residual": float(residual)}
        if residual > MIXTURE_RESIDUAL_TOL:
            mixture_ok = False
    evidence["max_mixture_residual"] = float(worst_residual)

    # (c) deterministic macro responses on carried atoms
    carried = np.zeros(model.atoms, dtype=bool)
    for mu in model.preparations.values():
        carried[support(mu)] = True
    macro_resp = model.response(macro)
    col_max = macro_resp[:, carried].max(axis=0) if carried.any() else np.array([])
    deterministic_ok = bool((col_max >= 1.0 - DETERMINISM_TOL).all())
    if not deterministic_ok:
        bad_local = int(np.argmin(col_max))
        bad_atom = int(np.where(carried)[0][bad_local])
        evidence["nondeterministic_atom"] = {
            "atom": bad_atom,
            "max_response": float(col_max[bad_local]),
        }

    if support_ok and mixture_ok:
        kind = "EMMR"
    elif support_ok:
        kind = "ESMR"
    elif deterministic_ok:
        kind = "SSMR"   # not support_ok already witnesses weight outside A
    else:
        kind = "NONE"
    return Classification(kind, evidence)
