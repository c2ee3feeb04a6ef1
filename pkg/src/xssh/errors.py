"""Error taxonomy for the xssh package.

Every numerical failure mode has a dedicated exception so the CLI can map
it to a machine-readable error record and a stable exit code.
"""


class XsshError(Exception):
    """Base class for all package errors."""


class ConfigError(XsshError):
    """A specification or CLI configuration violates its invariants."""


class NoEdgeSolution(XsshError):
    """The edge-localization equation has no positive root.

    Raised when j1/j2 >= N/(N+1): the finite-chain edge doublet merges
    with the bulk and the transcendental equation
    sinh(N*lam)/sinh((N+1)*lam) = j1/j2 has no solution.
    """


class ZeroManifoldAmbiguous(XsshError):
    """The near-zero spectral window does not contain the expected states."""


class ManifoldLeakage(XsshError):
    """The edge manifold is not separated from the bulk by a positive gap."""


class CalibrationFailed(XsshError):
    """Sweet-point refinement did not reach the required fidelity."""


class IntegratorStall(XsshError):
    """Master-equation step halving hit its floor without converging."""
