"""
Squeezed thermal bath mapped onto an equivalent hotter thermal bath.

A bath mode at occupation n, squeezed by r (phase 0), carries
n_eff = ((1 + 2n) cosh 2r - 1) / 2 excitations. Every heat-flow expression
of the machine keeps its thermal form with n replaced by n_eff, which
defines an effective inverse temperature beta_eff.
"""

import numpy as np


def effective_occupation(n: float, r: float) -> float:
    """
    Mean occupation of a squeezed thermal state.

    Args:
        n: Thermal occupation before squeezing
        r: Squeezing magnitude (>= 0)

    Returns:
        n_eff >= n, equal iff r = 0
    """
    return float(((1 + 2 * n) * np.cosh(2 * r) - 1) / 2)


def effective_beta(beta: float, omega: float, r: float) -> float:
    """
    Inverse temperature of the thermal state with occupation n_eff.

    beta_eff = (1/omega) * log[(tanh^2 r + e^{beta omega}) / (1 + tanh^2 r e^{beta omega})]

    Evaluated in log space so large beta * omega does not overflow.
    """
    if r == 0:
        return float(beta)
    log_t2 = 2 * np.log(np.tanh(r))
    x = beta * omega
    log_num = np.logaddexp(log_t2, x)
    log_den = np.logaddexp(0.0, log_t2 + x)
    return float((log_num - log_den) / omega)
