"""Short BLER comparison of the two (256, 64) designs under SCL(8).

The SNR point is where the minimum-weight union bounds of the two designs
first differ by a factor of ten.  The script stops each design at 30 block
errors, so it finishes in a few minutes; the acceptance suite runs the same
comparison to 100 errors.
"""

import math
import os

from scipy.optimize import brentq

from polarforge.codec import CodeConfig
from polarforge.construction import DesignSpec, construct_mixed, construct_reliability
from polarforge.reliability import biawgn
from polarforge.simulator import SimConfig, run_bler
from polarforge.spectrum import ub_min_weight

spec = DesignSpec(m=8, K=64, channel=biawgn(3.0, 0.25))
rel = construct_reliability(spec)
mix = construct_mixed(spec, rel.profile, rel)


def ub_gap(db):
    ch = biawgn(db, 0.25)
    return math.log10(ub_min_weight(rel.indices, rel.space, ch) / ub_min_weight(mix.indices, mix.space, ch)) - 1


snr = math.ceil(brentq(ub_gap, 0.0, 10.0) * 100) / 100
print(f"union bounds differ by 10x from {snr} dB")

sim = SimConfig((snr,), target_errors=30, seed=1, workers=os.cpu_count() or 1)
for name, d in (("reliability", rel), ("mixed", mix)):
    p = run_bler(CodeConfig(256, tuple(d.indices)), 8, sim).points[0]
    lo, hi = p.interval
    print(f"{name:>12}: BLER {p.bler:.3g} [{lo:.3g}, {hi:.3g}] after {p.blocks} blocks "
          f"({p.prune} pruned, {p.ml_like} ML-like)")
