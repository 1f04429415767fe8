"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class BorromeanError(Exception):
    exit_code = 1
    kind = "error"


class InvalidArgumentError(BorromeanError, ValueError):
    exit_code = 2
    kind = "invalid-argument"


class NoSquareRootError(BorromeanError, ValueError):
    exit_code = 2
    kind = "no-square-root"


class InadmissiblePairError(BorromeanError, ValueError):
    exit_code = 3
    kind = "inadmissible-pair"


class InadmissibleThirdPrimeError(BorromeanError, ValueError):
    exit_code = 3
    kind = "inadmissible-third-prime"


class NormalizationExhaustedError(BorromeanError, RuntimeError):
    exit_code = 1
    kind = "normalization-exhausted"


class ConsistencyError(BorromeanError, AssertionError):
    """Raised when an invariant that holds mathematically is violated: a bug."""

    exit_code = 1
    kind = "consistency"


class OracleInapplicableError(BorromeanError, ValueError):
    exit_code = 3
    kind = "oracle-inapplicable"


class CheckpointInvalidError(BorromeanError, ValueError):
    exit_code = 5
    kind = "checkpoint-invalid"
