"""Simulation-guided multi-criteria decision analysis for the Port of Dover
weighbridge expansion: scenario tree, cost-benefit formulas, traffic
simulation, weighted scoring and Monte-Carlo robustness analysis, with a
pipeline CLI and a what-if HTTP service on top.
"""

__version__ = "0.1.0"
