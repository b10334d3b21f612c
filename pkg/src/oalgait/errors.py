"""Exception types shared across the package."""


class OalError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(OalError):
    """Invalid robot/gait/environment configuration."""


class SingularBalance(OalError):
    """The drag force balance is numerically singular at a shape point."""

    def __init__(self, w, detail=""):
        self.w = tuple(float(v) for v in w)
        super().__init__(f"singular force balance at w={self.w} {detail}".strip())


class NonConservativeField(OalError):
    """Potential fit residual too large; the field is far from a gradient."""

    def __init__(self, rho, limit):
        self.rho = float(rho)
        self.limit = float(limit)
        super().__init__(
            f"field is not close to conservative: residual fraction "
            f"{rho:.3f} > {limit:.3f}"
        )


class CycleDetected(OalError):
    """Directed cycle found where a DAG was required."""


class DegenerateFit(OalError):
    """Input points are (near) collinear; no ellipse can be fit."""


class JointLimitExceeded(OalError):
    """A commanded joint angle exceeds the joint limit."""

    def __init__(self, sample_index, joint_index, angle, limit):
        self.sample_index = int(sample_index)
        self.joint_index = int(joint_index)
        super().__init__(
            f"joint {joint_index} at sample {sample_index}: "
            f"|{angle:.4f}| > limit {limit:.4f}"
        )


class PathOutsideDomain(OalError):
    """A shape-space path leaves the grid domain."""
