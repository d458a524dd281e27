#!/usr/bin/env python3
"""Trace the effective dimension N(lambda) against its polynomial growth bound.

For eigenvalues decaying like j**(-1/s) the effective dimension grows like
lambda**(-s) as lambda shrinks. The quadratic-decay case (s = 1/2) has the
closed form N(1) = (pi * coth(pi) - 1) / 2, checked here to full precision
with a truncation-corrected sum.
"""

import math

import numpy as np

from kernelcg import effective_dimension, make_model

# closed-form anchor: pure quadratic decay, no constant mode
J = 200_000
eig = np.arange(1, J + 1, dtype=float) ** -2.0
ed = effective_dimension(eig, 1.0, tail_decay=2.0, tail_from=J)
closed = (math.pi / math.tanh(math.pi) - 1.0) / 2.0
print(f"N(1) truncated sum : {ed.truncated_sum:.10f}")
print(f"N(1) with tail     : {ed.value:.10f}")
print(f"closed form        : {closed:.10f}")
print(f"difference         : {abs(ed.value - closed):.2e}")
print()

# growth bound for the shipped kernel model (constant mode included)
model = make_model(s=0.5, r=1.0, rho=1.0, truncation=2000)
print(f"fitted growth constant D = {model.ed_constant:.4f}")
print()
print("   lambda       N(lambda)   D^2 (lambda/kappa)^(-s)")
for k in range(7):
    lam = model.kappa * 10.0 ** (-k)
    n_lam = effective_dimension(model.eigenvalues, lam).value
    bound = model.ed_constant**2 * (lam / model.kappa) ** -model.s
    print(f"{lam:10.4g}  {n_lam:12.4f}  {bound:16.4f}")
