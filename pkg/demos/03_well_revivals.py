"""
Quantum revivals of a packet in an infinite well [-d, 0].

Because E_n grows like n^2, every state returns to itself after
T_rev = 4 m d^2 / (pi hbar). A packet started at the well center excites
only states even about the center (odd n), and for those n^2 = 1 mod 8,
so it already revives at T_rev / 8.
"""
import numpy as np

from packview import PacketParams, SpatialGrid, WaveField
from packview import analytic as an
from packview import spectral as sp
from packview.analysis import detect_revivals
from packview.oracle import l2_error

d = 1.0
grid = SpatialGrid(-d, 0.0, 4096)
for center in (-0.5, -0.3):
    base = an.GaussianTerm(center, PacketParams(0.05))
    w0 = WaveField(grid, 0.0, an.well_image_wavefunction(base, (-d, 0.0), grid.points, 0.0))
    exp = sp.project_packet(w0, d=d)
    T = exp.revival_time
    t = np.linspace(0, T, 1601)
    rep = detect_revivals(t, np.abs(sp.autocorrelation(exp, t)), 0.99)
    print(f"center {center}: captured {exp.captured:.12f}, "
          f"max |c_n| for even n = {np.abs(exp.coeffs[1::2]).max():.1e}")
    print("   revivals above 0.99 at t / T_rev =", np.round(rep.times_of_maxima / T, 5))

# The image sum and the eigenbasis agree at all times
base = an.GaussianTerm(-0.5, PacketParams(0.05))
w0 = WaveField(grid, 0.0, an.well_image_wavefunction(base, (-d, 0.0), grid.points, 0.0))
exp = sp.project_packet(w0, d=d)
worst = max(
    l2_error(WaveField(grid, t, an.well_image_wavefunction(base, (-d, 0.0), grid.points, t)),
             sp.evolve_eigenbasis(exp, t, grid))
    for t in np.linspace(0, exp.revival_time, 10)
)
print(f"image sum vs eigenbasis, worst L2 over a revival period: {worst:.1e}")
