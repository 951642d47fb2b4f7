"""Exception hierarchy.

Two families matter for the CLI exit codes: ValidationError (bad input,
exit 2) and NumericalError (a computation that cannot proceed, exit 3).
Every exception carries a short machine-readable ``code`` and an optional
``context`` dict that the CLI serializes to stderr.
"""


class QubitChainError(Exception):
    code = "error"

    def __init__(self, message, context=None):
        super().__init__(message)
        self.context = dict(context) if context else {}


class ValidationError(QubitChainError):
    """Invalid parameters, malformed input files, or out-of-contract calls."""

    code = "validation"


class CsvFormatError(ValidationError):
    """A capacitance table that cannot be parsed or fails its sanity checks."""

    code = "csv-format"


class StructureError(ValidationError):
    """Node labels that do not form the expected pad pairing."""

    code = "node-structure"


class FeasibilityError(ValidationError):
    """Design targets outside the reachable (chi, xi) region."""

    code = "infeasible-design"


class NumericalError(QubitChainError):
    code = "numerical"


class NotPositiveDefiniteError(NumericalError):
    """Cholesky factorization failed; ``pivot`` is the 1-based failing index."""

    code = "not-positive-definite"

    def __init__(self, message, pivot, context=None):
        ctx = {"pivot": pivot}
        if context:
            ctx.update(context)
        super().__init__(message, ctx)
        self.pivot = pivot


class SingularityError(NumericalError):
    """Singular '+' block (or a closed form evaluated at its divergent limit)."""

    code = "singular"


class TruncationError(NumericalError):
    """Charge-basis cutoff too small for the requested transmon."""

    code = "charge-truncation"


class BracketingError(NumericalError):
    """Inductance sweep range that does not bracket the resonance."""

    code = "resonance-not-bracketed"
