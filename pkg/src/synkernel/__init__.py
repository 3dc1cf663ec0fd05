"""Exact linear algebra for filtered (phi, N)-modules, p-adic Hodge complexes
and their Ext / syntomic cohomology groups."""

__version__ = "0.1.0"
