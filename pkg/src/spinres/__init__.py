"""Dipole-coupled planar nanomagnet arrays as reservoir computers.

Core pipeline: a macrospin simulation of the array (magnets, dynamics), a
trainable linear readout with optional weight quantization (readout), and a
waveform-identification benchmark that drives either the magnet array or a
software echo state network through the same task (task). An HTTP service
and a command-line client live under service and cli.
"""

__version__ = "0.1.0"
