"""Shared builders and independent oracles for the test suite.

The random-model families here are constructed to be exactly valid for
their fragments so framework properties can be asserted at tight
tolerances: split-atom state models (one cluster of atoms per catalogued
state), eigenstate-split models over macro-only fragments (eigenstate
supported without being mixtures), mixture models (mixtures only), and
product-measure models over deterministic response atoms of a witness
fragment (heavily overlapping supports).
"""

from __future__ import annotations

import itertools

import numpy as np

from macroreal import (
    Bindings,
    FiniteOntModel,
    QuantumFragment,
    StateVector,
    UnitaryMap,
    basis_measurement,
    born,
    computational_measurement,
    enumerate_atoms,
)


def random_state(rng: np.random.Generator, dim: int) -> StateVector:
    vec = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector.normalized(vec)


def random_unitary(rng: np.random.Generator, dim: int) -> UnitaryMap:
    mat = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(mat)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return UnitaryMap(q)


def basis_containing(state: StateVector) -> list[StateVector]:
    """Deterministic completion of a state to an orthonormal basis."""
    dim = state.dim
    cols = [state.amplitudes]
    for k in range(dim):
        v = np.eye(dim, dtype=complex)[k]
        for u in cols:
            v = v - (u.conj() @ v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-7:
            cols.append(v / norm)
        if len(cols) == dim:
            break
    return [StateVector(c) for c in cols]


def random_fragment(rng: np.random.Generator, dim: int) -> QuantumFragment:
    """Computational macro basis, a permutation unitary with a closed
    catalogue, and a measurement containing each non-eigenstate state."""
    eye = np.eye(dim, dtype=complex)
    states = {f"e{k}": StateVector(eye[k]) for k in range(dim)}
    perm = rng.permutation(dim)
    perm_matrix = np.zeros((dim, dim), dtype=complex)
    for i, j in enumerate(perm):
        perm_matrix[j, i] = 1.0
    unitaries = {"perm": UnitaryMap(perm_matrix)}

    measurements = {"macro": computational_measurement(dim, [f"q{k}" for k in range(dim)])}
    n_extra = int(rng.integers(1, 3))
    for t in range(n_extra):
        psi = random_state(rng, dim)
        states[f"s{t}"] = psi
        # close the catalogue under the permutation's orbit
        current = psi
        for step in range(1, 7):
            current = StateVector(perm_matrix @ current.amplitudes)
            if current.same_ray(psi, tol=1e-12):
                break
            states[f"perm{step}_s{t}"] = current
        measurements[f"probe{t}"] = basis_measurement(
            basis_containing(psi), [f"p{t}_{k}" for k in range(dim)]
        )
    return QuantumFragment(dim, states, unitaries, measurements, "macro")


def split_state_model(rng: np.random.Generator, fragment: QuantumFragment) -> FiniteOntModel:
    """Each catalogued state owns a random cluster of atoms sharing its Born
    response column; exact for any fragment."""
    names = list(fragment.states)
    clusters: dict[str, list[int]] = {}
    owner: list[str] = []
    for name in names:
        size = int(rng.integers(1, 4))
        clusters[name] = list(range(len(owner), len(owner) + size))
        owner.extend([name] * size)
    n_atoms = len(owner)

    preparations = {}
    for name in names:
        w = np.zeros(n_atoms)
        share = rng.uniform(0.2, 1.0, size=len(clusters[name]))
        w[clusters[name]] = share / share.sum()
        preparations[name] = w

    responses = {}
    outcome_labels = {}
    for mname, meas in fragment.measurements.items():
        cols = np.column_stack([born(fragment.states[s], meas) for s in owner])
        responses[mname] = cols
        outcome_labels[mname] = meas.outcomes

    macro = fragment.macro
    eigenstate_preps = {}
    for k, q in enumerate(macro.outcomes):
        members = [
            s for s in names
            if abs(born(fragment.states[s], macro)[k] - 1.0) <= 1e-12
        ]
        if members:
            eigenstate_preps[q] = tuple(members)

    maps = {}
    for uname, u in fragment.unitaries.items():
        gamma = np.zeros((n_atoms, n_atoms))
        for sname in names:
            image = StateVector.normalized(u.matrix @ fragment.states[sname].amplitudes)
            target = next(
                t for t in names if image.same_ray(fragment.states[t], tol=1e-10)
            )
            gamma[:, clusters[sname]] = preparations[target][:, None]
        maps[uname] = gamma

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses=responses,
        outcome_labels=outcome_labels,
        macro_measurement=fragment.macro_observable,
        eigenstate_preps=eigenstate_preps,
        maps=maps,
        delta_sets={name: (name,) for name in names},
    )


def unitary_image_name(fragment: QuantumFragment, uname: str, sname: str) -> str | None:
    u = fragment.unitaries[uname]
    image = StateVector.normalized(u.matrix @ fragment.states[sname].amplitudes)
    for tname, t in fragment.states.items():
        if image.same_ray(t, tol=1e-10):
            return tname
    return None


def macro_only_fragment(rng: np.random.Generator, dim: int) -> QuantumFragment:
    eye = np.eye(dim, dtype=complex)
    states = {f"e{k}": StateVector(eye[k]) for k in range(dim)}
    states["super"] = random_state(rng, dim)
    measurements = {"macro": computational_measurement(dim, [f"q{k}" for k in range(dim)])}
    return QuantumFragment(dim, states, {}, measurements, "macro")


def eigensplit_model(
    rng: np.random.Generator, fragment: QuantumFragment, mixture_only: bool
) -> FiniteOntModel:
    """Macro-only fragment model with two atoms per macro value.

    Eigenstate preparations split their value's atoms evenly. Other states
    get Born-weighted splits: even (a mixture of the declared eigenstate
    preparations) when ``mixture_only``, skewed (eigenstate supported but
    not a mixture) otherwise.
    """
    macro = fragment.macro
    dim = fragment.dim
    n_atoms = 2 * dim

    def value_block(k: int, split: float) -> np.ndarray:
        w = np.zeros(n_atoms)
        w[2 * k] = split
        w[2 * k + 1] = 1.0 - split
        return w

    preparations = {}
    eigen_names = {}
    for k, q in enumerate(macro.outcomes):
        preparations[f"eig{k}"] = value_block(k, 0.5)
        eigen_names[q] = (f"eig{k}",)

    delta_sets = {}
    for sname, state in fragment.states.items():
        probs = born(state, macro)
        w = np.zeros(n_atoms)
        for k in range(dim):
            split = 0.5 if mixture_only else float(rng.uniform(0.1, 0.4))
            w += probs[k] * value_block(k, split)
        pname = f"prep_{sname}"
        preparations[pname] = w
        delta_sets[sname] = (pname,)

    resp = np.zeros((dim, n_atoms))
    for k in range(dim):
        resp[k, 2 * k] = resp[k, 2 * k + 1] = 1.0

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses={"macro": resp},
        outcome_labels={"macro": macro.outcomes},
        macro_measurement="macro",
        eigenstate_preps=eigen_names,
        delta_sets=delta_sets,
    )


def product_model(fragment: QuantumFragment) -> FiniteOntModel:
    """Independent-product measures over deterministic response atoms.

    Valid for any fragment and gives every state an overlapping support,
    which makes the union-overlap properties non-trivial.
    """
    atoms = enumerate_atoms(fragment)
    meas_names = list(fragment.measurements)
    n_atoms = len(atoms)

    borns = {
        (s, m): born(fragment.states[s], fragment.measurements[m])
        for s in fragment.states
        for m in meas_names
    }
    preparations = {}
    for sname in fragment.states:
        w = np.array(
            [
                np.prod([borns[(sname, m)][k] for m, k in zip(meas_names, atom.outcomes)])
                for atom in atoms
            ]
        )
        preparations[sname] = w / w.sum()

    responses = {}
    outcome_labels = {}
    for mi, mname in enumerate(meas_names):
        meas = fragment.measurements[mname]
        resp = np.zeros((meas.n_outcomes, n_atoms))
        for ai, atom in enumerate(atoms):
            resp[atom.outcomes[mi], ai] = 1.0
        responses[mname] = resp
        outcome_labels[mname] = meas.outcomes

    macro = fragment.macro
    eigenstate_preps = {}
    for k, q in enumerate(macro.outcomes):
        members = [
            s for s in fragment.states
            if abs(borns[(s, fragment.macro_observable)][k] - 1.0) <= 1e-12
        ]
        if members:
            eigenstate_preps[q] = tuple(members)

    return FiniteOntModel(
        atoms=n_atoms,
        preparations=preparations,
        responses=responses,
        outcome_labels=outcome_labels,
        macro_measurement=fragment.macro_observable,
        eigenstate_preps=eigenstate_preps,
        delta_sets={s: (s,) for s in fragment.states},
    )


def full_bindings(model: FiniteOntModel, fragment: QuantumFragment) -> Bindings:
    """Identity bindings over the names shared by model and fragment, with
    delta-set preparations bound to their states."""
    preps = {}
    for sname in fragment.states:
        for pname in model.delta_sets.get(sname, ()):
            preps[pname] = sname
        if sname in model.preparations:
            preps.setdefault(sname, sname)
    meas = {m: m for m in fragment.measurements if m in model.responses}
    return Bindings(preparations=preps, measurements=meas)


def brute_force_overlap(model: FiniteOntModel, mu_name: str, targets) -> float:
    """Oracle: exhaustive minimum of mu(Omega) over atom subsets Omega with
    nu(Omega) = 1 for every preparation realizing every target."""
    if isinstance(targets, str):
        targets = (targets,)
    mu = model.preparation(mu_name)
    target_preps = []
    for t in targets:
        target_preps.extend(model.target_preparations(t))
    n = model.atoms
    if n > 16:
        raise ValueError("brute force oracle limited to 16 atoms")
    best = None
    for bits in itertools.product([0, 1], repeat=n):
        mask = np.array(bits, dtype=bool)
        if all(
            model.preparation(p)[mask].sum() >= 1.0 - 1e-12 for p in target_preps
        ):
            mass = mu[mask].sum()
            if best is None or mass < best:
                best = mass
    return float(best)


# -- the framework property suite ---------------------------------------------


def measurable_targets(model: FiniteOntModel, fragment: QuantumFragment) -> list[str]:
    """States with a delta set and a fragment measurement containing them as
    an outcome (prerequisite for the single-target overlap bound)."""
    out = []
    for sname in fragment.states:
        if sname not in model.delta_sets:
            continue
        state = fragment.states[sname]
        for meas in fragment.measurements.values():
            if born(state, meas).max() >= 1.0 - 1e-12:
                out.append(sname)
                break
    return out


def property_violations(
    model: FiniteOntModel,
    fragment: QuantumFragment,
    *,
    overlap_tol: float,
    mono_tol: float,
    sat_tol: float,
    kernel_tol: float = 1e-10,
    boole_tol: float = 1e-12,
) -> list[str]:
    """Check the overlap calculus on one validated model; returns violations.

    Covers: the unit-average kernel lemma, the single-target overlap bound
    against squared inner products, the union bound, monotonicity under
    bound stochastic maps, saturation on eigenstate-supported models, and
    the measurement bound on union overlaps.
    """
    from macroreal import (
        asymmetric_overlap,
        classify,
        kernel_set,
        predict,
        push_forward,
        support,
    )

    bad: list[str] = []
    macro_name = model.macro_measurement
    macro_labels = model.outcome_labels[macro_name]

    # kernel lemma on eigenstate response rows
    for q, pnames in model.eigenstate_preps.items():
        row = model.responses[macro_name][macro_labels.index(q)]
        for pname in pnames:
            mu = model.preparation(pname)
            if abs(mu @ row - 1.0) <= 1e-12:
                k = kernel_set(row, mu)
                if mu[k].sum() < 1.0 - kernel_tol:
                    bad.append(f"kernel lemma fails for {pname}/{q}")

    bound_preps = [
        (pname, sname)
        for sname in fragment.states
        for pname in model.delta_sets.get(sname, ())
    ]
    targets = measurable_targets(model, fragment)

    # single-target overlap bounded by the squared inner product
    for pname, sname in bound_preps:
        for tname in targets:
            value = asymmetric_overlap(model, pname, tname).value
            ceiling = abs(fragment.states[tname].inner(fragment.states[sname])) ** 2
            if value > ceiling + overlap_tol:
                bad.append(
                    f"overlap bound fails: w({tname}|{pname})={value:.6g} "
                    f"> {ceiling:.6g}"
                )

    # union bound
    resolvable = [s for s in fragment.states if s in model.delta_sets]
    for pname, _ in bound_preps[:4]:
        for i in range(len(resolvable)):
            for j in range(i + 1, len(resolvable)):
                x, y = resolvable[i], resolvable[j]
                union = asymmetric_overlap(model, pname, (x, y)).value
                split = (
                    asymmetric_overlap(model, pname, x).value
                    + asymmetric_overlap(model, pname, y).value
                )
                if union > split + boole_tol:
                    bad.append(f"union bound fails for ({x},{y}|{pname})")

    # transformation monotonicity
    for uname in fragment.unitaries:
        if uname not in model.maps:
            continue
        for pname, sname in bound_preps:
            for tname in resolvable:
                image = unitary_image_name(fragment, uname, tname)
                if image is None or image not in model.delta_sets:
                    continue
                pushed = push_forward(model, pname, uname)
                tagged = model.with_preparation("__pushed__", pushed)
                before = asymmetric_overlap(model, pname, tname).value
                after = asymmetric_overlap(tagged, "__pushed__", image).value
                if after < before - mono_tol:
                    bad.append(
                        f"monotonicity fails: w({image}|{uname} {pname})="
                        f"{after:.6g} < {before:.6g}"
                    )

    # saturation on eigenstate-supported models
    kind = classify(model, fragment).kind if all(
        q in model.eigenstate_preps for q in macro_labels
    ) else None
    if kind in ("EMMR", "ESMR"):
        for pname, sname in bound_preps:
            born_macro = fragment.born(sname, macro_name)
            total = 0.0
            for k, q in enumerate(macro_labels):
                w = asymmetric_overlap(model, pname, q).value
                total += w
                if abs(w - born_macro[k]) > sat_tol:
                    bad.append(
                        f"saturation fails: w({q}|{pname})={w:.6g} "
                        f"!= {born_macro[k]:.6g}"
                    )
            if abs(total - 1.0) > sat_tol:
                bad.append(f"saturation sum fails for {pname}: {total:.6g}")

    # measurement bound on union overlaps
    for pname, sname in bound_preps[:4]:
        for mname, meas in fragment.measurements.items():
            pred = predict(model, pname, mname)
            for i in range(len(resolvable)):
                for j in range(i + 1, len(resolvable)):
                    x, y = resolvable[i], resolvable[j]
                    sup = set(np.where(fragment.born(x, mname) > 1e-12)[0])
                    sup |= set(np.where(fragment.born(y, mname) > 1e-12)[0])
                    ceiling = float(pred[sorted(sup)].sum())
                    union = asymmetric_overlap(model, pname, (x, y)).value
                    if union > ceiling + overlap_tol:
                        bad.append(
                            f"measurement bound fails for ({x},{y}|{pname}) "
                            f"on {mname}"
                        )
    return bad


def additivity_violations(model: FiniteOntModel, tol: float = 1e-10) -> list[str]:
    """Union overlap additivity on witness-fragment models: the measured
    triple forces w({phi,zero}|mu_psi) = w(phi|.) + w(zero|.)."""
    from macroreal import asymmetric_overlap

    union = asymmetric_overlap(model, "psi", ("phi", "zero")).value
    split = (
        asymmetric_overlap(model, "psi", "phi").value
        + asymmetric_overlap(model, "psi", "zero").value
    )
    if abs(union - split) > tol:
        return [f"additivity fails: union={union:.6g} split={split:.6g}"]
    return []
