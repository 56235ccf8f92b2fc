"""Boundary pieces of a few limit shapes: curved part, flat segments, spikes and crevices."""

from cornergrowth.measures import Measure1D
from cornergrowth.shape import ShapeSpec, boundary, gamma, rost_spec, spike_crevice_segment

half = Measure1D.dirac(0.5)
specs = {
    "homogeneous": rost_spec(),
    "slow column": ShapeSpec.build(half, half, 0.0, 0.5, frakA=0.5, frakB=0.5),
    "two-atom alpha": ShapeSpec.build(Measure1D([(0.4, 0.5), (1.0, 0.5)]), half, 0.2, 0.25),
    "uniform alpha": ShapeSpec.build(Measure1D.uniform(0.5, 1.5), half, 0.5, 0.5),
}

for name, spec in specs.items():
    geo = boundary(spec, samples=101)
    print(f"{name}: gamma(1, 1) = {gamma(spec, 1.0, 1.0):.6f}")
    print(f"  intercepts: vertical {geo.vertical_intercept:.4f}, horizontal {geo.horizontal_intercept:.4f}")
    for piece in ("flat_v", "flat_h", "spike_v", "spike_h"):
        seg = getattr(geo, piece)
        if seg is not None:
            (x0, y0), (x1, y1) = seg
            print(f"  {piece}: ({x0:.4f}, {y0:.4f}) -> ({x1:.4f}, {y1:.4f})")

spec = specs["slow column"]
for low in (0.5, 0.0, -0.25):
    f = spike_crevice_segment(spec, low, "vertical")
    print(f"rows with min a = {low:+.2f}:", "nothing" if f is None else f"{f.kind} on y in [{f.lo}, {f.hi}]")
