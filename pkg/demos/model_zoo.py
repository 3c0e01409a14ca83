#!/usr/bin/env python3
"""The classification landscape on reference models.

Builds the hemisphere-cap qubit model on a 20000-node golden-angle grid,
the state-atom model, and the value-definite extension, validates each
against its fragment, and prints where each lands in the
mixture / eigenstate-support / value-definite taxonomy.
"""

import math

from macroreal import (
    beltrametti_bugajski_model,
    bloch_vector,
    classify,
    deterministic_extension_model,
    emmr_toy_model,
    fibonacci_sphere_grid,
    kochen_specker_model,
    qubit_fragment,
    standard_qubit_fragment,
    validate,
)
from macroreal.ontomodel import Bindings

NODES = 20000

frag = standard_qubit_fragment()
bindings = Bindings(
    preparations={n: n for n in frag.states},
    measurements={m: m for m in frag.measurements},
)

print("=" * 72)
print(f"Model zoo on a {len(frag.states)}-state qubit fragment")
print("=" * 72)

print(f"\n[hemisphere-cap model, {NODES} nodes]")
grid = fibonacci_sphere_grid(NODES)
ks = kochen_specker_model(grid, frag)
rep = validate(ks, frag, bindings, tol=1e-3)
verdict = classify(ks, frag)
print(f"  validation: max deviation {rep.max_deviation:.2e} (tol 1e-3) -> {rep.passed}")
print(f"  classification: {verdict.kind}")
print(f"  worst mixture residual: {verdict.evidence['max_mixture_residual']:.4f} "
      "(a cap is not a mixture of the two macro caps)")

print("\n[state-atom model]")
bb = beltrametti_bugajski_model(frag)
rep = validate(bb, frag, bindings, tol=1e-12)
verdict = classify(bb, frag)
print(f"  validation: max deviation {rep.max_deviation:.2e} -> {rep.passed}")
print(f"  classification: {verdict.kind}")
print(f"  witness: {verdict.evidence.get('nondeterministic_atom')}")

print("\n[value-definite extension]")
det_frag = qubit_fragment(
    {n: tuple(bloch_vector(s)) for n, s in frag.states.items()},
    {"macro": (0.0, 0.0, 1.0)},
)
det = deterministic_extension_model(det_frag)
det_bindings = Bindings(
    preparations={n: n for n in det_frag.states},
    measurements={"macro": "macro"},
)
rep = validate(det, det_frag, det_bindings, tol=1e-12)
verdict = classify(det, det_frag)
print(f"  atoms: {det.atoms} (state, value) pairs")
print(f"  validation: max deviation {rep.max_deviation:.2e} -> {rep.passed}")
print(f"  classification: {verdict.kind}")

print("\n[two-state mixture model]")
toy, toy_frag = emmr_toy_model(math.pi / 3)
verdict = classify(toy, toy_frag)
print(f"  classification: {verdict.kind}")

print("""
summary:
  cap model        -> eigenstate-supported, not mixture-only (ESMR)
  state-atom model -> atoms answer the macro observable statistically (NONE)
  value-definite   -> definite values on atoms outside eigenstate supports (SSMR)
  mixture model    -> mixtures of the two macro eigenstates only (EMMR)
""")
