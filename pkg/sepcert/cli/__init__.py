# sepcert/cli/__init__.py
# Re-export the entry point for the root main.py and `python -m sepcert.cli`
from .main import main
