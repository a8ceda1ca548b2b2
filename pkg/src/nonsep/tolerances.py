"""Tolerance policy for the whole package.

All geometric predicates compare against thresholds derived from one
context object instead of scattering magic constants. The three base
tolerances:

* ``geom``: membership / tightness comparisons on coordinates,
* ``lp``: feasibility and reduced-cost thresholds inside the simplex solver,
* ``gap``: minimal projection gap that certifies separation (a gap at or
  below this counts as touching, and touching is not separation).

Derived thresholds scale with the size of the data they are applied to;
the helpers below are the single place where those multipliers live.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceContext:
    geom: float = 1e-9
    lp: float = 1e-8
    gap: float = 1e-9

    def feas(self, scale: float = 1.0) -> float:
        """Point-in-polytope slack: generous against solve round-off."""
        return 100.0 * self.geom * max(1.0, scale)

    def tight(self, scale: float = 1.0) -> float:
        """Facet tightness threshold used when classifying vertices."""
        return 1e3 * self.geom * max(1.0, scale)

    def dedupe(self, scale: float = 1.0) -> float:
        """Distance under which two computed points count as one vertex."""
        return 1e3 * self.geom * max(1.0, scale)


DEFAULT_TOLS = ToleranceContext()
