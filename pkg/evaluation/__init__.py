"""Brute-force oracles and the self-check that compares them with the formulas.

This package provides the independent reference computations (dense
projection, LP robustness, Jacobi eigenvalues, grid distance), the catalogue
of checks built on them, and the evaluator that runs and summarizes them.
"""
