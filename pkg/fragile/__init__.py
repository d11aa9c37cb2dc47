__version__ = "0.1.0"

from . import core
from . import errors

from . import laurent
from . import lattice
from . import spectra
from . import gbz
from . import greens
from . import hierarchy
from . import dynamics

from .laurent import LaurentOperator
from .laurent import SeparableSymbol
from .lattice import LatticeGeometry
from .lattice import OperatorMatrix
