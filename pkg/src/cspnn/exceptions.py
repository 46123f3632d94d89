"""Exception hierarchy shared by the library and the command line."""


class CsPnnError(Exception):
    """Base class for all errors raised by :mod:`cspnn`."""


class ContractViolation(CsPnnError, ValueError):
    """An argument broke a documented precondition (shape, sign, dimension)."""


class ModelEmptyError(ContractViolation):
    """The operation needs at least one hidden unit."""


class NotFoundError(CsPnnError, LookupError):
    """A unit id or class label does not exist in the model."""


class ConfigError(CsPnnError, ValueError):
    """Invalid experiment or dataset configuration."""


class DataParseError(CsPnnError, ValueError):
    """A data or model file could not be parsed.

    Parameters
    ----------
    message : str
        Human readable description.
    path : str, optional
        File being read.
    line : int, optional
        1-based line number for text formats.
    """

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        super().__init__(where + message)
