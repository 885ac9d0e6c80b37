"""Dense numpy evaluation of dS_vN - dS_tot and c_1 at t = 400 us.

Builds the (N+1)-dimensional star Hamiltonian, diagonalizes it with
`numpy.linalg.eigh`, forms w = Q exp(-i lam t) Q^T and c = |w|^2 f.
The printed values are frozen into `tests/sweep_oracle.rs`.
"""

import numpy as np

HBAR = 1.054571817e-34
KB = 1.380649e-23


def run(n_modes, t=400e-6):
    w1, wc, lo, hi, eta = 4e6, 3e6, 0.026e6, 20e6, 1e-3
    t_a0, t_b0 = 10e-6, 50e-6
    om = np.linspace(lo, hi, n_modes)
    dw = (hi - lo) / (n_modes - 1)
    g = np.sqrt(eta * om * np.exp(-om / wc) * dw)
    n = n_modes + 1
    h = np.zeros((n, n))
    h[0, 0] = w1
    h[np.arange(1, n), np.arange(1, n)] = om
    h[0, 1:] = g
    h[1:, 0] = g
    lam, q = np.linalg.eigh(h)
    w = (q * np.exp(-1j * lam * t)) @ q.T
    freqs = np.concatenate([[w1], om])
    temps = np.array([t_a0] + [t_b0] * n_modes)
    f = 1 / np.tanh(HBAR * freqs / (2 * KB * temps))
    c = (np.abs(w) ** 2) @ f

    def entropy(c):
        nb = (c - 1) / 2
        return (1 + nb) * np.log1p(nb) - nb * np.log(nb)

    diff = HBAR * w1 * (f[0] - c[0]) / 2 / t_b0 / KB + (entropy(f[1:]) - entropy(c[1:])).sum()
    return diff, c[0]


if __name__ == "__main__":
    for n in (1000, 2000, 3000, 4000):
        d, c1 = run(n)
        print(f"N={n} ep_difference_kB={d:.15e} c1={c1:.15e}")
