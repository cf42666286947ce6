'''
Spectral zeta functions of fractal Laplacians: the Sierpinski gasket by spectral decimation, a self-similar
Sturm-Liouville operator by renormalization, and the factorizations that tie them to Riemann's zeta function.
'''
from logging import getLogger

from .errors import FractalZetaError
from .ifs_measure import SLConstants, build_grid, make_constants
from .sg_decimation import decimation_spectrum, eigensolve_direct
from .spectrum import Provenance, SpectrumList
from .sturm_liouville import GeneratingSet, generating_set
from .values import Agreement, ZetaMethod, ZetaValue
from .zeta_engine import riemann_reference, sg_zeta_factorized, zeta_rho, zeta_S

log = getLogger('fractal_zeta')

__all__ = (
    'Agreement',
    'FractalZetaError',
    'GeneratingSet',
    'Provenance',
    'SLConstants',
    'SpectrumList',
    'ZetaMethod',
    'ZetaValue',
    'build_grid',
    'decimation_spectrum',
    'eigensolve_direct',
    'generating_set',
    'make_constants',
    'riemann_reference',
    'sg_zeta_factorized',
    'zeta_S',
    'zeta_rho',
)
