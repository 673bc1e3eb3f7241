"""Independent evaluations whose outputs are frozen into the C++ tests.

Run with: python3 tests/oracles/derive_values.py
Uses mpmath (50 digits) for closed forms and numpy for the 25x25 Liouvillian.
"""
import mpmath as mp
import numpy as np
from statsmodels.stats.proportion import proportion_confint

mp.mp.dps = 50
hbar = mp.mpf("1.054571817e-34")
eps0 = mp.mpf("8.8541878128e-12")
kB = mp.mpf("1.380649e-23")
c = mp.mpf("299792458")
ea0 = mp.mpf("8.4783536255e-30")
tp = 2 * mp.pi

mu = [mp.mpf("2.98915") * ea0, mp.mpf("0.014396210727") * ea0,
      mp.mpf("2291.3137043") * ea0, mp.mpf("1264.50275") * ea0]
Gam = [0, tp * 6e6, tp * 3e3, tp * 2e3, tp * 2e3]
Op, Oc, OI = mu[0] * 1 / hbar, mu[1] * 8e4 / hbar, mu[3] * 1 / hbar
DI = -tp * mp.mpf("31e9")
N, L, lam = mp.mpf("1e17"), mp.mpf("0.075"), mp.mpf("780e-9")


def gpair(i, j):
    return (Gam[i] + Gam[j]) / 2


def out(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


out("probe_rabi_1Vm", Op)
out("coupling_rabi_80kVm", Oc)
out("interference_rabi_1Vm", OI)
out("rf_rabi_7uVcm", mu[2] * mp.mpf("7e-4") / hbar)
K = 4 * mp.pi * N * L * mu[0] ** 2 / (hbar * eps0 * lam * Op)
out("beer_lambert_prefactor", K)
shift = OI ** 2 / (4 * DI)
out("stark_shift", shift)
out("stark_shift_1MHz", (tp * 1e6) ** 2 / (4 * (-tp * mp.mpf("31e9"))))


def rho21_cf(dc, E, dp=0, drf=0, OIx=OI, Opx=Op):
    Orf = mu[2] * E / hbar
    d5 = -1j * (dp + dc + drf + DI) + gpair(4, 0)
    d4 = -1j * (dp + dc + drf) + gpair(3, 0) - (0.5j * OIx) ** 2 / d5
    d3 = -1j * (dp + dc) + gpair(2, 0) - (0.5j * Orf) ** 2 / d4
    d2 = -1j * dp + gpair(1, 0) - (0.5j * Oc) ** 2 / d3
    return -(0.5j * Opx) / d2


r = rho21_cf(tp * 3e3, mp.mpf("7e-4"))
out("wp_rho21_re", r.real)
out("wp_rho21_im", r.imag)

# numeric steady state (numpy, double precision, independent vectorization: column-major)
f = lambda x: float(x)
G = [f(g) for g in Gam]


def steady(M):
    def rhs(R):
        Lr = np.zeros((5, 5), complex)
        for i in range(5):
            for j in range(5):
                if i != j:
                    Lr[i, j] = -(G[i] + G[j]) / 2 * R[i, j]
        for i in range(5):
            Lr[i, i] = (G[i + 1] * R[i + 1, i + 1] if i < 4 else 0) - G[i] * R[i, i]
        return -0.5j * (M @ R - R @ M) + Lr
    A = np.zeros((25, 25), complex)
    for k in range(25):
        E = np.zeros(25, complex); E[k] = 1
        A[:, k] = rhs(E.reshape(5, 5, order="F")).reshape(25, order="F")
    A[0, :] = 0
    for i in range(5):
        A[0, i * 5 + i] = 1
    b = np.zeros(25, complex); b[0] = 1
    return np.linalg.solve(A, b).reshape(5, 5, order="F")


def Mmat(E, dc, Opx=Op, OIx=OI):
    M = np.zeros((5, 5))
    off = [f(Opx), f(Oc), f(mu[2] * E / hbar), f(OIx)]
    for i in range(4):
        M[i, i + 1] = M[i + 1, i] = off[i]
    cum = np.cumsum([0, dc, 0, f(DI)])
    for i in range(4):
        M[i + 1, i + 1] = -2 * cum[i]
    return M


rn = steady(Mmat(7e-4, f(tp * 3e3)))
print(f"num_rho21_re = {rn[1,0].real:.17g}")
print(f"num_rho21_im = {rn[1,0].imag:.17g}")
print(f"num_rho11 = {rn[0,0].real:.17g}")
Kf = f(K)
levels = []
for k in range(8):
    R = steady(Mmat(k * 1e-4, f(shift)))
    levels.append(np.exp(Kf * R[1, 0].imag))
print("levels_at_analytic_shift = " + ", ".join(f"{v:.17g}" for v in levels))

# two-level saturation check values
# noise model
T2 = 1 / (0.5 * (Gam[2] + Gam[3]))
out("dephasing_time", T2)
Emin = tp * hbar / (mu[2] * mp.sqrt(mp.mpf("0.5e5") * mp.mpf("1e-4") * T2))
out("projection_min_field", Emin)

# conventional receiver
Q = lambda x: mp.erfc(x / mp.sqrt(2)) / 2
out("q_of_1", Q(1))
Aeff = lambda fr, G_: (c / fr) ** 2 * G_ / (4 * mp.pi)
out("aeff_14p2GHz", Aeff(mp.mpf("14.2e9"), mp.mpf("1.5")))
out("kT_290", kB * 290)
fields = [k * mp.mpf("1e-4") for k in range(8)]
mean = sum(fields) / 8
Es = mean ** 2 / (2 * 377) * mp.mpf("1e-4") * Aeff(mp.mpf("14.2e9"), mp.mpf("1.5"))
out("symbol_energy", Es)
Es2 = sum(x * x for x in fields) / 8 / (2 * 377) * mp.mpf("1e-4") * Aeff(mp.mpf("14.2e9"), 1.5)
out("symbol_energy_mean_of_squares", Es2)
EI = lambda att: mp.mpf(1) / (2 * 377) * mp.mpf("1e-4") * Aeff(mp.mpf("3.5e9"), mp.mpf("1.5")) * mp.power(10, -mp.mpf(att) / 10)
out("interference_energy_85dB", EI(85))
for att in (70, 75, 80, 85):
    n = kB * 290 + EI(att)
    out(f"conventional_ser_{att}dB", 2 * (1 - mp.mpf(1) / 8) * Q(mp.sqrt(6 * Es / (63 * n))))

lo, hi = proportion_confint(1, 1000000, alpha=0.05, method="wilson")
print(f"wilson_1_of_1e6 = {lo:.17g}, {hi:.17g}")
lo, hi = proportion_confint(37, 1000, alpha=0.05, method="wilson")
print(f"wilson_37_of_1000 = {lo:.17g}, {hi:.17g}")
