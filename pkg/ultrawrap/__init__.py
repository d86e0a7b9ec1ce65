"""
ultrawrap - exact ultrametric arithmetic, Cayley-Dickson algebras over p-adic fields,
difference-quotient calculus and desk-scale wrap group models.
"""

__version__ = "0.1.0"
__author__ = "Stephen Hartzell"
__email__ = "hartzell.stephen@gmail.com"

# Expose version at package level
__all__ = ["__version__", "__author__", "__email__"]
