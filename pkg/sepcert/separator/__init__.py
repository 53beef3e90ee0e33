# sepcert/separator/__init__.py
from .bipartite import separate_bipartite, separate_pencil
from .multipartite import separate_mpdo
from .verify import verify_certificate
from .witness import cmin_witness
