"""Step-initial TASEP: particle heights and flux against their hydrodynamic limits."""

import numpy as np

from cornergrowth.measures import Measure1D
from cornergrowth.params import ParamPair, RowConstant
from cornergrowth.shape import ShapeSpec, fixed_row_speed, limit_flux, limit_height, rost_spec
from cornergrowth.tasep import TasepSampler, trajectory

pp = ParamPair.homogeneous(cap=6000)
spec = rost_spec()
s = TasepSampler(pp, seed=0)
for n, t in [(10, 100.0), (100, 400.0), (400, 1600.0)]:
    print(f"H({n}, {t:g}) = {s.height(n, t):5d}   limit {limit_height(spec, n, t):8.2f}")
for m, t in [(1, 400.0), (100, 400.0), (400, 800.0)]:
    print(f"F({m}, {t:g}) = {s.flux(m, t):5d}   limit {limit_flux(spec, m, t):8.2f}")

# a slow first column holds the leading particle to speed 1 / A(0) = 1/2
slow = ParamPair(RowConstant.constant(0.5, 6000), RowConstant.constant(0.5, 6000, [(1, 0.0)]))
speed = fixed_row_speed(ShapeSpec.build(Measure1D.dirac(0.5), Measure1D.dirac(0.5), 0.5, 0.5), 0.0)
ts = np.array([500.0, 1000.0, 2000.0, 4000.0])
for t, h, sigma in trajectory(slow, 1, ts, seed=3):
    print(f"t = {t:6g}: H = {h:5d}  H/t = {h / t:.3f}  (limit {speed})  position {sigma}")
