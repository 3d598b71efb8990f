"""Q1 finite elements for anisotropic singular perturbation problems on the
unit square and the unit cube

Directory
---------
mesh
    Tensor-product meshes of (0,1)^N with the X1/X2 coordinate split
space
    Piecewise-Q1 nodal fields, interpolation, evaluation and prolongation
problems
    Diffusion specs, sources, the eps block scaling and the smooth cutoff
assembly
    Sparse assembly of stiffness, mass and load operators
solver
    Jacobi preconditioned conjugate gradients and a dense LU oracle
analysis
    Norms, errors, second-difference indicators and log-log rate fits
harness
    The harness used for all high level management of an experiment
loader
    Library of loader functions for reading configs and writing reports
keylang
    The tokenizer, parser, and interpreter for KeyLang, the language used by
anisopy to write coefficient and source expressions in json configs
cli
    The command line entry point
"""

from .mesh import *
from .space import *
from .problems import *
from .assembly import *
from .solver import *
from .analysis import *
from .harness import *
from .loader import *
from .keylang import *
