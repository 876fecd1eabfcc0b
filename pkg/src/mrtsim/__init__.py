"""Simulation testbed and decision algorithm for micro-randomized brushing-prompt trials.

Subpackages follow the pipeline: ``features`` (algorithm state), ``reward``
(proximal outcome and burden cost), ``policy`` (Bayesian linear regression
with action centering and smoothed allocation), ``envmodel`` (participant
environment fitting from brushing data), ``simenv`` (outcome generation,
responsivity decay, app-opening), ``scheduler`` (deployment-fidelity action
schedules), ``harness`` (trial and experiment runners), ``cli`` (entry points).
"""

__version__ = "0.1.0"
