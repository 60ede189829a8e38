"""Exact symbolic calculus for superconnections on polynomial charts."""

from .coeffs import Poly, Ratio
from .errors import (ConsistencyError, DimensionError, HomogeneityError,
                     ParameterError, ParityError, RankError, SuperconnError,
                     TruncationError)
from .exterior import (Christoffel, Form, VectorField, VectorForm, ext_d,
                       interior, wedge)
from .derivations import (DerivationSpec, GeneratorAction, apply_derivation,
                          d_as_derivation, decompose_derivation, der_bracket,
                          lie_derivative, reconstruct_action, spec_from_action)
from .bundles import (EndForm, ESection, SuperRank, dnablaE, end_apply,
                      end_compose, end_d, end_power, supertrace)
from .quillen import (DegreeOneData, SuperconnectionD, classical_chern,
                      sc_apply, sc_curvature, sc_curvature_bruteforce)
from .cartan import (EndSuperForm, ESuperForm, GradedConnection, K0Tensor,
                     K1Tensor, SuperForm, covariant_sform_d, curvature_2sform,
                     graded_curvature, insert_derivation, nn_apply, sform_d,
                     sform_mul)
from .correspondence import (NTensor, antisym_K0, curvature_relation,
                             decompose_superconnection, induce, same_induced,
                             tilde_K1, with_N)
from .chern import (ChernReport, chern_match, chern_report, chern_superform,
                    is_closed, kappa, supertangent_chern, transgression)

__version__ = "0.1.0"
