"""
ZenoLimit - Zeno-limit reduction of boundary-driven Lindblad systems.

Computes the projected generators of a strongly dissipated composite
system, the Davies average of the projected dissipator, the Hilbert
expansion of the steady state, and empirical checks of the reduced
dynamics, with a command line for config-driven runs.
"""

__version__ = "0.1.0"
__app_name__ = "ZenoLimit"
