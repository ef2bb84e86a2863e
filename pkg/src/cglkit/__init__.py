"""CGL extensions: deleting derivations and their torus-invariant prime ideals."""
__version__ = "0.1.0"
