"""Physical constants, CODATA values truncated to 6 significant figures."""

C_M_PER_S = 2.99792e8        # speed of light in vacuum (m/s)
HBAR_J_S = 1.05457e-34       # reduced Planck constant (J s)
EPS0_F_PER_M = 8.85419e-12   # vacuum permittivity (F/m)
KB_J_PER_K = 1.38065e-23     # Boltzmann constant (J/K)
