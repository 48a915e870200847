"""Lattice codes for over-the-air gradient aggregation.

Two codes let a federator decode the integer sum of quantized gradients
sent simultaneously over an AWGN multiple-access channel: a balanced-numeral
code on a scaled cubic lattice, whose error rate does not depend on the
number of devices, and a Construction-A nested lattice code over a prime
field.
"""

from .balanced import BalancedConfig
from .channel import ChannelConfig, snr_to_noise_power, transmit
from .lattice import Lattice, LatticeStats, cubic_lattice, hexagonal_lattice
from .nested import NestedCode, NotPrime, PrimeTooSmall, ReceiverConfig, build_code
from .quantizer import QuantizerConfig, dequantize_sum, quantize

__version__ = "0.1.0"

__all__ = [
    "BalancedConfig",
    "ChannelConfig",
    "Lattice",
    "LatticeStats",
    "NestedCode",
    "NotPrime",
    "PrimeTooSmall",
    "QuantizerConfig",
    "ReceiverConfig",
    "build_code",
    "cubic_lattice",
    "dequantize_sum",
    "hexagonal_lattice",
    "quantize",
    "snr_to_noise_power",
    "transmit",
]
