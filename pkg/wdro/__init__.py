"""
Worst-off distributionally robust optimization under partially observed
group labels: solver, trainers, synthetic benchmarks and verification.
"""

__version__ = "1.0.0"
