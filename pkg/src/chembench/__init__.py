"""Chemical-language toolkit and LLM benchmark harness.

Subpackages: ``chemgraph`` (SMILES parsing, canonical form, formulas),
``fingerprint``, ``scaffold``, ``metrics``, ``taskgen`` (instruction-data
builders), ``harness`` (benchmark runner and reports), ``cli``.
"""

__version__ = "0.1.0"
