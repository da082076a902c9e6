"""SAT-based mining of flexible sequences in transactional datasets.

Thin Python facade over the C++ core. The heavy lifting (CNF encoding, the
CDCL solver, pattern enumeration and the brute-force reference miner) lives in
the `_core` extension module.
"""

from ._core import Dataset, SeqsatError, encode_dimacs, mine, oracle_mine

__all__ = ["Dataset", "SeqsatError", "mine", "oracle_mine", "encode_dimacs"]
