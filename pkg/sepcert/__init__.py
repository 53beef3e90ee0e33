# sepcert/__init__.py

# This file makes `sepcert/` a Python package.
# Entry points most callers want:

from .separator.bipartite import separate_bipartite
from .separator.multipartite import separate_mpdo
from .separator.verify import verify_certificate

__all__ = [
    "separate_bipartite",
    "separate_mpdo",
    "verify_certificate",
]
