"""What was sent, given what was measured?

A transmitter draws Fock states |0>..|9> with equal priors; the receiver
is a photon counter behind a lossy line.  Given one observed count, Bayes
over the probe ensemble gives the posterior over what was sent; the same
question answered with the retrodicted state gives identical numbers.

Run: python3 demos/02_bayesian_retrodiction.py
"""

import numpy as np

from qdetchar import (
    born_probability,
    ideal_pnr,
    lossy_pnr,
    retrodict_ensemble,
    retrodicted_state,
    uniform_fock_ensemble,
)

DIM = 10
ensemble = uniform_fock_ensemble(DIM)


def bar(p, width=40):
    return "#" * int(round(p * width))


# Perfect counter first: counting n pins the preparation to exactly |n>.
posterior = retrodict_ensemble(ideal_pnr(DIM), "3", ensemble)
print("ideal counter, observed count 3:")
for label, prob in posterior:
    if prob > 1e-12:
        print(f"  sent |{label}>  p = {prob:.6f}  {bar(prob)}")

# Now the same count behind 60% transmission.  A count of 3 can come from
# any m >= 3 photons with binomial thinning, so the posterior spreads.
lossy = lossy_pnr(0.6, DIM)
posterior = retrodict_ensemble(lossy, "3", ensemble)
print("\nlossy counter (eta = 0.6), observed count 3:")
for label, prob in posterior:
    if prob > 1e-6:
        print(f"  sent |{label}>  p = {prob:.6f}  {bar(prob)}")

# The retrodicted state route: for a uniform ensemble the posterior for
# |m> is just the m-th diagonal of the retrodicted state times dim.
retro = retrodicted_state(lossy.outcome("3"))
diag_route = np.diag(retro.state).real
bayes_route = np.array([p for _, p in posterior])
print(
    "\nretrodicted-state route vs Bayes route, largest gap:",
    f"{np.max(np.abs(diag_route - bayes_route)):.3e}",
)

# Sanity: predictive and retrodictive probabilities are linked through the
# same element.  Sending |5> and asking for count 3 is born_probability;
# seeing count 3 and asking for |5> is the posterior above.
p_fwd = born_probability(np.eye(DIM)[5], lossy.outcome("3"))
print(f"\nforward check: Pr(count 3 | sent |5>) = {p_fwd:.6f}")
print(f"posterior      Pr(sent |5> | count 3) = {dict(posterior)['5']:.6f}")
