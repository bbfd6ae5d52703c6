"""Digital preparation of bosonic coherent states on qubit registers.

Two routes are provided: compiling the Trotterized displacement operator from
the Pauli-string decomposition of the truncated ladder operators, and
variational circuit learning over three ansatz schemes. Both are checked
against analytic Fock-space baselines.
"""

from coherent.errors import CoherentError, DomainError, TruncationWarning, UnsupportedGateError

__all__ = ["CoherentError", "DomainError", "TruncationWarning", "UnsupportedGateError"]
