"""
Algorithms: assignment solver, group weights, predictor, data generation,
trainers, bounds checks and evaluation.
"""
