"""Figure rendering for chaospic run directories.

Consumes only the documented CSV/JSON artifacts; never imports the solver.
"""

from .artifacts import ArtifactError, RunArtifacts, load_run
from .plots import plot_convergence, plot_energy, plot_phase_space, plot_sod

__version__ = "0.1.0"
