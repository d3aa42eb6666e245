"""Computation and verification engine for the spectral geometry of the
quantum projective plane: q-deformed su(3) representations, the quantum
coordinate algebras, the antiholomorphic (Dolbeault) complex, the Dirac
operator and its closed-form spectrum, plus an exact noncommutative
rewriting engine for the quantum 5-sphere coordinate relations."""

__version__ = "0.1.0"

from .qarith import (
    LaurentScalar,
    QArithError,
    QParam,
    UnsupportedModeError,
    qbinom,
    qfact,
    qint,
    qparam_exact,
    qparam_float,
    qpow,
)

__all__ = [
    "LaurentScalar",
    "QArithError",
    "QParam",
    "UnsupportedModeError",
    "qbinom",
    "qfact",
    "qint",
    "qparam_exact",
    "qparam_float",
    "qpow",
    "__version__",
]
