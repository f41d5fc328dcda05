"""Cluster-cycle combinatorics, Thurston pullback and conjugacy invariants
for bicritical matings of unicritical polynomials."""

from .angles import Angle, AngleOrbit, Itinerary, angle_orbit, itinerary, co_lands
from .combinatorics import (MatingSpec, RayClass, StarModel, ClusterData, LevyReport,
                            ClusterConfiguration, ray_classes, cluster_data,
                            levy_check, twist_solvable)
from .solver import PolySpec, center_solve, verify_parameter, discover_centers
from .pullback import (BicriticalCoefficients, MarkedConfiguration, PullbackTrace,
                       initial_configuration, solve_coefficients, pullback_step,
                       realize_mating, realize)
from .invariants import MultiplierSpectrum, spectrum, equivalent, compare
from .render import RenderJob, render_dynamical, render_parameter

__version__ = "0.1.0"
