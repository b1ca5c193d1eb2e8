"""Exception types shared across the package."""


class JacobiPowersError(Exception):
    """Base class for every error raised by this package."""


class PoleAt(JacobiPowersError):
    def __init__(self, z):
        super().__init__(f"Gamma has a pole at z={z!r}")
        self.z = z


class NoConvergence(JacobiPowersError):
    pass


class ParameterPole(JacobiPowersError):
    pass


class EndpointMismatch(JacobiPowersError):
    pass


class DivergentLimit(JacobiPowersError):
    def __init__(self, exponent, magnitude):
        super().__init__(
            f"uncancelled term of order (1-x)^{exponent:.6g} "
            f"(aggregate magnitude {magnitude:.3e})"
        )
        self.exponent = exponent
        self.magnitude = magnitude


class ExtrapolationUnstable(JacobiPowersError):
    pass


class DegenerateDenominator(JacobiPowersError):
    def __init__(self, k, endpoint, value):
        super().__init__(
            f"Gram-Schmidt denominator [phi_{k}, v_{k}]({endpoint:+d}) = {value!r} is degenerate"
        )
        self.k = k
        self.endpoint = endpoint
        self.value = value


class DegenerateSpectralPoint(JacobiPowersError):
    pass


class ExceptionalParameter(JacobiPowersError):
    def __init__(self, mus):
        super().__init__(f"exceptional spectral parameters mu = {list(mus)!r}")
        self.mus = list(mus)


class OnSpectrum(JacobiPowersError):
    def __init__(self, lam, detail=""):
        msg = f"lambda={lam!r} lies on the spectrum"
        super().__init__(msg + (f" ({detail})" if detail else ""))
        self.lam = lam


class SingularMatrix(JacobiPowersError):
    pass
