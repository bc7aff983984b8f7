"""Numerics for the tenth-order thin film equation u_t = div(|u|^n grad lap^4 u).

Subpackages and modules:

* ``core``         -- quadrature, root finding, conics, special functions
* ``spectral``     -- rescaled heat kernel of u_t = lap^5 u and its eigensystem
* ``odeshoot``     -- adaptive Runge-Kutta integration and multi-parameter shooting
* ``similarity``   -- similarity exponents and nonlinear/linear eigenprofiles
* ``continuation`` -- n-branch tracing from the linear limit
* ``branching``    -- Lyapunov-Schmidt expansion coefficients and branch counts
* ``unstable``     -- the unstable variant with backward diffusion
* ``cli``          -- command line interface
"""

__version__ = "0.1.0"
