"""Central numerical tolerances.

Every module takes its thresholds from a single Tolerances record so that
acceptance runs can echo one consistent configuration.
"""

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class Tolerances:
    # algebraic invariants (unit norms, orthogonality, matrix identities)
    algebraic: float = 1e-12
    # geometric residuals (areas, matched lengths, angle sums)
    geometric: float = 1e-9
    # near-tangent incidence threshold: |theta| within this of pi/2
    tangent: float = 1e-7
    # exit within this arc length of a polygon corner counts as a vertex hit
    vertex_hit: float = 1e-9
    # samplers redraw anything this close to a degenerate configuration
    sampler_guard: float = 1e-7
    # minimum crossing angle accepted by the pairing estimators
    angle_floor: float = 1e-4
    # straightened length must be stationary to this under one more pass
    length_stationary: float = 1e-10
    # straightening collapse below this length means a null-homotopic class
    degenerate_length: float = 1e-6
    # maximum chambers in a window gallery before giving up (near-tangency)
    window_cap: int = 64

    def summary(self) -> str:
        return " ".join(f"{f.name}={getattr(self, f.name):g}" for f in fields(self))


DEFAULT = Tolerances()
