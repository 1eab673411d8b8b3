# Exception hierarchy shared by every module of the package.


class CircumscriptionException(Exception):
    ''' Base class of every error raised by dl_circumscription '''
    pass


class KBSyntaxError(CircumscriptionException):
    """ Raised when a KB, counting formula, circuit or tiling text does not parse

    Parameters:
        message (str):
            The formatted message, including the marked input line
        line (int):
            1-based line of the failure
        col (int):
            1-based column of the failure
    """

    def __init__(self, message, line=None, col=None):
        super(KBSyntaxError, self).__init__(message)
        self.line = line
        self.col = col


class PatternError(CircumscriptionException):
    ''' Raised on a circumscription pattern violation; names the offending predicate '''

    def __init__(self, message, predicate=None):
        super(PatternError, self).__init__(message)
        self.predicate = predicate


class PreconditionError(CircumscriptionException):
    pass


class EnumerationLimitError(CircumscriptionException):
    ''' Raised when an exhaustive enumeration would exceed its configured ceiling '''

    def __init__(self, message, estimate=None, ceiling=None):
        super(EnumerationLimitError, self).__init__(message)
        self.estimate = estimate
        self.ceiling = ceiling


class CircuitError(CircumscriptionException):
    pass


class EvaluationError(CircumscriptionException):
    pass


class TilingError(CircumscriptionException):
    ''' Raised on a tiling problem without tiles or with conditions over unknown tiles '''
    pass
