"""Toolkit for computations in finite modular lattices: terms and
presentations, explicit lattices and lattice oracles, submodule arithmetic,
frames and towers, coordinate rings, glued sums, and the compiler from group
presentations to lattice identities."""

__version__ = "0.1.0"
