"""Exact population transitions in driven quantum systems.

Eigenvectors of ``W = E U(tau)``, where ``E`` exchanges two basis states
``|I>`` and ``|F>``, are initial states whose population of ``|I>`` at
``t = 0`` reappears in ``|F>`` at ``t = tau``.
"""

from .cxla import EigenPair, hermitian_eigendecomposition, jacobi_eigh, unitary_eigendecomposition
from .errors import (
    BadBloch,
    BadSpin,
    ConfigError,
    ConvergenceFailure,
    DegenerateInput,
    DimensionMismatch,
    DomainError,
    ExactPopError,
    NotHermitian,
    NotUnitary,
    NumericalError,
    ValidationError,
)
from .hammod import (
    CustomStatic,
    CustomTimeSeries,
    DrivenTLS,
    KickedTLS,
    StaticTLS,
    ThreeLevelChain,
    ZeemanSweep,
    angular_momentum,
    build_hamiltonian,
)
from .prop import Propagation, propagate, propagate_kicked, propagate_static, propagate_timedep
from .sigmax import BlochVector, max_significance_state, s_vector
from .xtrans import (
    ALL_TIMES,
    ExchangeSpec,
    TransitionSet,
    exchange_operator,
    superposition_exact_times,
    transition_set,
    verify_exact,
)

__version__ = "0.1.0"
