"""
powerbound - Main Package

Simulation and certification of autonomous quantum machines: bipartite
system/agent dynamics, the two agent-fluctuation power bounds with their
speed-limit proof chain, the ideal clock engine and the canned scenarios
that exercise them.
"""

__version__ = "0.1.0"
