"""ghx: graph complex homology computations with exact sparse linear algebra."""

__version__ = "0.1.0"
