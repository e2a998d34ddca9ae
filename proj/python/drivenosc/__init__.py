"""Driven quantum harmonic oscillator in a truncated Fock basis.

Propagates the amplitude systems of two quantizations of the sinusoidally
driven oscillator (the Hamiltonian and a time-dependent constant of motion)
and exposes the observables and analytic oracles used to validate them.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
