"""Lattice counting for Gauss-circle variants.

Exact representation counts r_d(n), Ramanujan-tau partial sums, Gauss-sum
arithmetic for Eisenstein coefficients, one-sheeted hyperboloid counts,
the four Mellin cutoff kernels, and asymptotic model fitting, plus a CLI
(``gv``) that reruns each empirical check and emits CSV/JSON.
"""

__version__ = "0.1.0"
