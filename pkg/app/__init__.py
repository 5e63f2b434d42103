"""
Edge-Walk Discrepancy

Constructive discrepancy minimization: the Edge-Walk partial coloring, the
recursive full-coloring pipelines for general and bounded-degree set systems,
an exhaustive oracle for small instances, and a command-line front end.
"""

__version__ = "0.1.0"
