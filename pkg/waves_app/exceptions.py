"""
Error types raised by the numerical modules.

Every error carries a ``detail`` message and a machine-readable ``code``;
the CLI maps them to exit statuses and the API to response bodies.
"""


class WaveError(Exception):
    default_detail = 'Traveling-wave computation failed.'
    default_code = 'error'

    def __init__(self, detail=None, code=None):
        self.detail = detail if detail is not None else self.default_detail
        self.code = code if code is not None else self.default_code
        super().__init__(self.detail)

    def __str__(self):
        return str(self.detail)


class NonFiniteInput(WaveError, ValueError):
    default_detail = 'Inputs must be finite.'
    default_code = 'non_finite_input'


class PoleProximity(WaveError):
    default_detail = 'Argument too close to a pole of the Weierstrass function.'
    default_code = 'pole_proximity'


class WrongClass(WaveError):
    default_detail = 'Solution class does not admit this evaluation.'
    default_code = 'wrong_class'


class DegenerateMu(WaveError):
    default_detail = 'Highest-order coefficient vanishes (mu = 0).'
    default_code = 'degenerate_mu'


class DegenerateCubic(WaveError):
    default_detail = 'Cubic coefficient a3 is zero.'
    default_code = 'degenerate_cubic'


class WrongRegion(WaveError):
    default_detail = 'Parameters lie outside the region of this family.'
    default_code = 'wrong_region'


class ComplexDiscriminant(WaveError):
    default_detail = 'Coefficient radicand is negative.'
    default_code = 'complex_discriminant'


class NoRootInBracket(WaveError):
    default_detail = 'Constraint does not change sign on the bracket.'
    default_code = 'no_root_in_bracket'


class NoConvergence(WaveError):
    default_detail = 'Newton iteration did not converge.'
    default_code = 'no_convergence'


class ConstraintViolated(WaveError):
    default_detail = 'Parameters are off the constraint curve h(mu2, c) = 0.'
    default_code = 'constraint_violated'


class SingularPoint(WaveError):
    default_detail = 'Wave evaluated at a singularity.'
    default_code = 'singular_point'


class SingularSample(WaveError):
    default_detail = 'Function failed inside the finite-difference stencil.'
    default_code = 'singular_sample'


class InvalidNu(WaveError):
    default_detail = 'Spectral simulation requires nu < 1/6.'
    default_code = 'invalid_nu'


class InvalidDelta1(WaveError):
    default_detail = 'Spectral simulation requires delta1 > 0.'
    default_code = 'invalid_delta1'


class InvalidGrid(WaveError):
    default_detail = 'Grid requires L > 0 and N a power of two with N >= 16.'
    default_code = 'invalid_grid'


class BlowUp(WaveError):
    default_detail = 'Solution exceeded the blow-up guard.'
    default_code = 'blowup'

    def __init__(self, detail=None, code=None, t=None, max_abs=None, state=None):
        super().__init__(detail, code)
        self.t = t
        self.max_abs = max_abs
        self.state = state


class ConfigError(WaveError):
    default_detail = 'Invalid run configuration.'
    default_code = 'config_error'
