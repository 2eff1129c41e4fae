"""
Test package for v1di4.
"""
