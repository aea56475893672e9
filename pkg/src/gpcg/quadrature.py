"""Triangle quadrature used by every non-trivial integral in the package.

A single 6-point Gauss rule, exact for polynomials up to degree 4.  P1
quartics (the |u|^4 term and all |u|^2-weighted mass forms) are degree 4,
so using this one rule everywhere keeps the discrete energy, its
derivatives and the Lagrange-multiplier identity mutually consistent to
rounding.
"""

import numpy as np

# Two symmetric orbits of three points, barycentric coordinates.
_A1 = 0.445948490915965
_B1 = 1.0 - 2.0 * _A1
_W1 = 0.223381589678011
_A2 = 0.091576213509771
_B2 = 1.0 - 2.0 * _A2
_W2 = 0.109951743655322

# (6, 3) barycentric points; for P1 these double as basis values.
TRI_POINTS = np.array(
    [
        [_B1, _A1, _A1],
        [_A1, _B1, _A1],
        [_A1, _A1, _B1],
        [_B2, _A2, _A2],
        [_A2, _B2, _A2],
        [_A2, _A2, _B2],
    ]
)

# Weights normalized to sum to 1; integrals are area * sum(w * f(x_q)).
TRI_WEIGHTS = np.array([_W1, _W1, _W1, _W2, _W2, _W2])

# w_q * phi_i(q) * phi_j(q), the (nq, 3, 3) table behind all weighted
# mass-type assemblies.
PHI_PHI_W = TRI_WEIGHTS[:, None, None] * TRI_POINTS[:, :, None] * TRI_POINTS[:, None, :]
