class FedPickError(ValueError):
    """Base class for every error raised by the simulator."""


class ConfigurationError(FedPickError):
    """Inconsistent shapes, dimensions, hyperparameters or config keys."""


class UsageError(FedPickError):
    """An API was called in a way it does not support."""


class TrainingError(FedPickError):
    """Training produced a state it cannot continue from (NaN/Inf, bad batch)."""


class DataError(FedPickError):
    """Dataset contents violate the dataset invariants."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        """
        :param message: Description of what was wrong.
        :param line: 1-based line number in the source file, if known.
        """
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ProtocolError(FedPickError):
    """Client uploads cannot be combined by the server."""


class AnalysisError(FedPickError):
    """Feature diagnostics received degenerate input."""


__all__ = [
    'FedPickError', 'ConfigurationError', 'UsageError', 'TrainingError',
    'DataError', 'ParseError', 'ProtocolError', 'AnalysisError',
]
