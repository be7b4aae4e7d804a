"""Exact verification of weak Hopf quasigroups and strong Hopf modules."""

__version__ = "0.1.0"
