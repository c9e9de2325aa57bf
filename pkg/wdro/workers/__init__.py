"""
Parallel runners for sweeps and ablations.
"""
