"""Exception hierarchy shared by all modules.

Every exception carries the process exit code the CLI maps it to.
"""


class AitError(Exception):
    exit_code = 1


class ConfigError(AitError):
    """Malformed input files, flags or violated preconditions."""

    exit_code = 2


class ParseError(ConfigError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NotPrefixFree(ConfigError):
    def __init__(self, shorter, longer):
        self.pair = (shorter, longer)
        super().__init__(f"{shorter!r} is a prefix of {longer!r}")


class BadEnumeration(ConfigError):
    pass


class NotDeepest(ConfigError):
    def __init__(self, program, witness):
        self.program = program
        self.witness = witness
        super().__init__(f"{witness!r} runs longer than {program!r}")


class MissingH(ConfigError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"no complexity value supplied for n={n}")


class NotIncreasing(ConfigError):
    pass


class RunViolation(ConfigError):
    def __init__(self, window, d):
        self.window = window
        self.d = d
        super().__init__(f"window {window!r} contains a run of length >= {d}")


class QueryTooLong(AitError):
    exit_code = 3

    def __init__(self, query, bound):
        self.query = query
        self.bound = bound
        super().__init__(f"query of length {len(query)} exceeds bound {bound}")


class InsufficientBits(AitError):
    exit_code = 4


class PrecisionUnreachable(AitError):
    exit_code = 4


class WindowExhausted(AitError):
    exit_code = 4


class BudgetExhausted(AitError):
    exit_code = 4


class EmptyDomain(AitError):
    exit_code = 5


class EmptyS(AitError):
    exit_code = 5

    def __init__(self, stage):
        self.stage = stage
        super().__init__(f"no admissible extension at stage {stage}")


class KraftOverflow(AitError):
    exit_code = 6

    def __init__(self, length, free_measure, index=None, exact_sum=None):
        self.length = length
        self.free_measure = free_measure
        self.index = index
        self.exact_sum = exact_sum
        msg = f"no free interval of measure 2^-{length} (free measure {free_measure})"
        if index is not None:
            msg = f"request {index}: {msg}; Kraft sum would be {exact_sum}"
        super().__init__(msg)
