"""Closed-form constants of the reference-parameter bath at 50 digits.

Run with `python3 derived_constants.py`; the printed values are frozen into
`tests/derived_constants.rs`.
"""

from mpmath import mp, mpf, pi, exp, coth

mp.dps = 50

HBAR = mpf("1.054571817e-34")
KB = mpf("1.380649e-23")

OMEGA1 = mpf("4e6")
OMEGA_C = mpf("3e6")
OMEGA_MIN = mpf("0.026e6")
OMEGA_MAX = mpf("20e6")
ETA = mpf("1e-3")
T_A0 = mpf("10e-6")
T_B0 = mpf("50e-6")


def spacing(n):
    return (OMEGA_MAX - OMEGA_MIN) / (n - 1)


def main():
    gamma = pi * ETA * OMEGA1 * exp(-OMEGA1 / OMEGA_C)
    nbar = 1 / (exp(HBAR * OMEGA1 / (KB * T_B0)) - 1)
    c1_initial = coth(HBAR * OMEGA1 / (2 * KB * T_A0))
    c1_final = coth(HBAR * OMEGA1 / (2 * KB * T_B0))
    for n in (1000, 2000, 3000, 4000, 6000, 8000):
        dw = spacing(n)
        print(f"N={n} delta_omega={mp.nstr(dw, 20)} t1={mp.nstr(2 * pi / dw, 20)}")
    print(f"gamma={mp.nstr(gamma, 20)}")
    print(f"nbar={mp.nstr(nbar, 20)}")
    print(f"c1_initial={mp.nstr(c1_initial, 20)}")
    print(f"c1_final={mp.nstr(c1_final, 20)}")
    print(f"coupling_at_4mhz={mp.nstr((ETA * spacing(4000) * OMEGA1 * exp(-OMEGA1 / OMEGA_C)) ** 0.5, 20)}")


if __name__ == "__main__":
    main()
