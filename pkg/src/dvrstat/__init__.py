"""dvrstat: exact arithmetic for group-ring idempotents, DVR-module
statistics, extension/conjugacy counting, class-2 cover lattice sums,
and Cohen-Lenstra style measures, with brute-force oracles throughout.
"""

__version__ = "0.1.0"
