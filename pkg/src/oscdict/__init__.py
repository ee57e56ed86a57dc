"""oscdict: deterministic low-coherence dictionaries in C^p built from
Heisenberg and Weil representation eigenbases, with coherence analytics
and matching-pursuit sparse recovery."""

from .analysis import (CoherenceReport, babel_profile, coherence,
                       shifted_coherence, verify_orthonormal)
from .dictionary import (Atom, Dictionary, expected_size,
                         extended_dictionary, heisenberg_dictionary,
                         iter_split_groups, nonsplit_oscillator,
                         oscillator_dictionary, split_oscillator,
                         standard_torus_basis)
from .field import FpElement, FpField, is_prime, prime_factors
from .heisenberg import HeisenbergElement, h_inv, h_mul, identity, omega, pi
from .linalg import (EigenDecomposition, eig_unitary, inner,
                     phase_normalize, unitarity_defect)
from .sl2 import (BruhatFactorization, SL2Element, TorusDescriptor, bruhat,
                  nonsplit_tori, sl2_elements, sl2_inv, sl2_mul, sl2_order,
                  sp_action, split_representatives, split_tori,
                  torus_elements, torus_generator)
from .sparse import (RecoveryError, SparseRepresentation, omp,
                     recovery_experiment, synthesize, thresholding)
from .storage import (CorruptDictionaryError, load_dictionary, load_signal,
                      save_dictionary, save_signal)
from .weil import (WeilOperator, chirp_op, egorov_defect, fourier_op, rho,
                   scaling_op, scalar_defect)

__version__ = "0.1.0"
