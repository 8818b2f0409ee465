"""dgkoszul: exact DG (co)algebra computations, level certificates and
Koszul duality checks on finite degree windows."""

__version__ = "0.1.0"
