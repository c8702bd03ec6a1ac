"""Exception hierarchy.

Every error carries a ``payload()`` dict so the CLI can serialize the
failing module's diagnostics.
"""


class HillzoneError(Exception):
    """Base class for all library errors."""

    module = "hillzone"

    def payload(self):
        data = {"error": type(self).__name__, "module": self.module, "message": str(self)}
        data.update({k: v for k, v in vars(self).items() if not k.startswith("_")})
        return data


class InvalidPotential(HillzoneError):
    module = "potential"


class BandwidthExceeded(HillzoneError):
    module = "potential"

    def __init__(self, n, bandwidth):
        super().__init__(f"index {n} exceeds resolvable bandwidth {bandwidth}")
        self.n = int(n)
        self.bandwidth = int(bandwidth)


class ConfigError(HillzoneError):
    """Bad potential file or CLI configuration; ``where`` cites line or key."""

    module = "cli"

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class IntegrationFailure(HillzoneError):
    module = "floquet"

    def __init__(self, lam, x, reason="step-size underflow"):
        super().__init__(f"{reason} at x={x:.6g} for lambda={complex(lam)!r}")
        self.lam = [float(complex(lam).real), float(complex(lam).imag)]
        self.x = float(x)
        self.reason = reason


class NumericsError(HillzoneError):
    module = "spectrum"


class NumberingAmbiguity(HillzoneError):
    module = "spectrum"

    def __init__(self, n, t, count=None):
        msg = f"localization disc for index {n} at t={t:.6g}"
        if count is not None:
            msg += f" holds {count} eigenvalues"
        super().__init__(msg)
        self.n = int(n)
        self.t = float(t)
        self.count = count


class CoalescenceNotFound(HillzoneError):
    module = "spectrum"

    def __init__(self, n):
        super().__init__(f"no coalescence point bracketed for band {n}")
        self.n = int(n)


class ContourFailure(HillzoneError):
    module = "spectrum"


class JumpDeclarationRequired(HillzoneError):
    module = "criteria"
