# sepcert/schmidt/__init__.py
# Operator Schmidt decompositions, MPDO conversions and Hermitian re-expression
from .decompose import operator_schmidt, osr, osr_across_cuts
from .hermitize import hermitize_bipartite, hermitize_mpdo
from .mpdo import compress_hermitian_bonds, dense_from_mpdo, mpdo_from_dense
