# define error types


class ShapeError(ValueError):
    """Raised when tensor shapes are not compatible."""
    pass


class ConfigError(ValueError):
    """Raised for invalid configuration or unusable inputs."""
    pass


class ManifestError(ValueError):
    """Raised when a dataset manifest fails validation."""
    pass


class GenerationError(ValueError):
    """Raised when synthetic data cannot be generated for given config."""
    pass


class UndefinedMetricError(ValueError):
    """Raised when a metric has an empty denominator."""
    pass


class CalibrationError(KeyError):
    """Raised when calibration stats do not cover a model tensor."""
    pass


class ContainerError(ValueError):
    """Base error of malformed model containers."""
    pass


class MagicError(ContainerError):
    """Raised when the container does not start with expected magic."""
    pass


class TruncatedError(ContainerError):
    """Raised when the container is shorter than declared."""
    pass


class ChecksumError(ContainerError):
    """Raised when the container CRC does not match its content."""
    pass


class ImageFormatError(ValueError):
    """Raised for malformed PPM images."""
    pass


class AccumulatorOverflowError(ArithmeticError):
    """Raised when an int8 layer could overflow its 32-bit accumulator."""
    pass
