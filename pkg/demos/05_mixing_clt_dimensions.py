"""
Statistical signatures of the maximizing measure
=================================================

On the solvable line the maximizing measure is the arcsine law, so every
statistical claim can be put on trial: correlations of smooth observables
decay exponentially, Birkhoff sums satisfy a CLT, and the calibration
sets recover their textbook box dimensions.
"""

import math

import numpy as np

from henonshift.stats import (
    box_dimension,
    cantor_sample,
    chebyshev_polynomial,
    clt_test,
    coboundary,
    coordinate,
    covariance_decay,
    lipschitz_bump,
    return_decay_check,
    sample_mme_1d,
    segment_sample,
    square_sample,
    young_dimension,
)
from henonshift.words import full_model, synthetic_census
from henonshift.markov import radii

F = lambda x: x * x - 2.0
mu = sample_mme_1d("arcsine", 400_000, seed=0)

# the coordinate is orthogonal to all its images: covariances sit below
# the noise floor at every lag and the fit reports the degenerate case
fit = covariance_decay(F, mu, coordinate(), coordinate(), n_max=8)
print(f"psi = x:     degenerate (all lags under noise {fit.noise_floor:.1e}),"
      f" kappa = {fit.kappa}, r2 = {fit.r2}")

# a Lipschitz bump has energy at every even harmonic: genuine decay
bump = lipschitz_bump(0.0, 1.0)
fit2 = covariance_decay(F, mu, bump, bump, n_max=9)
print(f"bump:        kappa = {fit2.kappa:.3f}, r2 = {fit2.r2:.3f},"
      f" lags used {fit2.used}")

# the harmonics themselves make the mechanism exact: T_j vs T_k o f^n
# couples only when j = k 2^n
fit3 = covariance_decay(F, mu, chebyshev_polynomial(2), chebyshev_polynomial(1), n_max=3)
print(f"T2 vs T1:    covariances {np.round(fit3.values, 3)} (expect 2, 0, 0)")

# central limit theorem for Birkhoff sums, and its designed failure mode
rep = clt_test(F, mu, coordinate(), n=4096, trials=2000, alpha=0.01, seed=17)
print(f"\nCLT psi = x: sigma_hat = {rep.sigma_hat:.4f} (sqrt 2 = {math.sqrt(2):.4f}),"
      f" p = {rep.p_value:.3f}, passed = {rep.passed}")
cob = clt_test(F, mu, coboundary(np.sin, F), n=4096, trials=1000, alpha=0.01, seed=17)
print(f"coboundary:  degenerate = {cob.degenerate}"
      f" (sigma_hat {cob.sigma_hat:.2e} << static sd {cob.static_sd:.2f})")

# return-time tails of the synthetic word shift decay exponentially
census = synthetic_census(full_model(100), 60)
h_top = -math.log(radii(census).R)
decay = return_decay_check(None, census, h_top)
print(f"return tail: kappa = {decay.kappa:.3f}, exponential = {decay.exponential}")

# box-counting calibration: segment, square, middle-thirds set
dyadic = [2.0**-k for k in range(2, 10)]
triadic = [3.0**-k for k in range(1, 11)]
print(f"\nbox dimensions: segment {box_dimension(segment_sample(200_000, 1), dyadic):.3f},"
      f" square {box_dimension(square_sample(400_000, 2), dyadic):.3f},"
      f" cantor {box_dimension(cantor_sample(300_000, 3), triadic):.3f}"
      f" (log2/log3 = {math.log(2) / math.log(3):.3f})")

# entropy and exponents combine into a dimension through Young's formula
print(f"young dimension at (h, l1, l2) = (log2, log2, -log4): "
      f"{young_dimension(math.log(2), math.log(2), -math.log(4)):.3f}")
