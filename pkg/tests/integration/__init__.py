"""
Integration Tests Package

End-to-end runs of the bundled scenario config through the command line.
"""
