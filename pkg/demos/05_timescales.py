"""
The three clocks of the problem: spreading (t0), overlap of two packets
(T_O) and revival in a well of the same size (T_rev).
"""
from packview import PacketParams
from packview.spectral import timescales

print(f"{'beta':>6} {'d':>5} {'t0':>10} {'T_O':>10} {'T_rev':>10} {'T_rev/T_O':>10} {'(T_O/t0)^2':>11}")
for beta, d in ((0.1, 2.0), (0.05, 1.0), (0.02, 1.0), (1.0, 10.0)):
    ts = timescales(PacketParams(beta, d))
    print(f"{beta:6.2f} {d:5.1f} {ts.t0:10.4g} {ts.T_overlap:10.4g} {ts.T_rev:10.4g} "
          f"{ts.ratio_rev_overlap:10.4g} {ts.ratio_overlap_t0_sq:11.4g}")
