"""Exact geometric algebra of Cl(1,n) with Dirac-Hestenes verification tools."""
from .blades import Signature, blade_mul, grade_involution_sign, reversion_sign
from .lorentz import LorentzMatrix, SpinElement, adjoint_matrix, classify_spin, kernel_check, lift
from .multivector import (
    Kind,
    Multivector,
    QPrimeSpec,
    complex_conjugate,
    format_mv,
    hermitian_conjugate,
    in_qprime,
    in_qprime_even,
    inverse,
    reversion,
)
from .parse import ParseError, parse_mv
from .polyfield import FieldMV, PolyScalar, Potential, linear_substitute
from .spinor_ideal import (
    IdempotentSpec,
    Psi_from_psi,
    build_idempotent,
    decompose_S,
    psi_from_Psi,
    transform_wavefunction,
    verify_injectivity,
)

__version__ = "0.1.0"
