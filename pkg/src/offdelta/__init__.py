"""
offdelta: two trapped particles interacting through two displaced delta potentials.

Relative Hamiltonian, in oscillator units:

    H = -d^2/dx^2 + x^2/4 + g [delta(x + c) + delta(x - c)]
"""
__version__ = "0.1.0"
