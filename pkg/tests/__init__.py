"""
Test Suite Package

Unit tests for the operator layer, machines, bounds, clock engine,
scenarios and command line, plus end-to-end integration runs.
"""
