"""Sorting detectors into the three-outcome taxonomy.

Builds the canonical detector models, computes the per-outcome estimators
(projectivity, ideality, trace weight), and prints where each outcome lands:
ProjectiveIdeal, ProjectiveNonIdeal, or NonProjective.

Run: python3 demos/01_detector_taxonomy.py
"""

from qdetchar import (
    estimator_report,
    fock_state,
    ideal_pnr,
    lossy_pnr,
    on_off_apd,
    scaled_projector,
)

DIM = 12


def show(name, povm_or_elements):
    print(f"\n{name}")
    print(f"  {'outcome':>8}  {'projectivity':>12}  {'ideality':>10}  {'weight':>8}  category")
    for el in povm_or_elements:
        r = estimator_report(el)
        print(
            f"  {r.outcome_label:>8}  {r.projectivity:12.6f}  {r.ideality:10.6f}"
            f"  {r.trace_weight:8.4f}  {r.category.value}"
        )


# A perfect photon counter retrodicts exactly one Fock state per outcome:
# every outcome is a rank-1 projector with full weight, hence ideal.
show("ideal photon counter", ideal_pnr(DIM))

# Losses mix photon numbers into each count outcome.  The retrodicted
# states become mixed, so projectivity and ideality both drop below 1 and
# the taxonomy reports NonProjective outcomes.
show("photon counter behind a 60% transmission line", lossy_pnr(0.6, DIM))

# A click/no-click avalanche diode bundles every n >= 1 into one outcome.
# The click outcome is very far from a projector.
show("on/off avalanche photodiode, eta = 0.5", on_off_apd(0.5, 0.0, DIM))

# A detector may retrodict a pure state yet fire only on a fraction of
# the ideal events: pure retrodiction (projectivity 1) with reduced
# weight.  That is the middle category, ProjectiveNonIdeal.
show(
    "single-photon projector firing 30% of the time",
    [scaled_projector(fock_state(1, DIM), 0.3, label="hit")],
)

print(
    "\nRule of thumb: projectivity asks 'is the retrodicted state pure?', "
    "ideality additionally asks 'does it fire every time?'."
)
