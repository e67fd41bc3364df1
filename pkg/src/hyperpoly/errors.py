"""Exception hierarchy shared by every module.

Each exception carries a stable ``code`` string used by the CLI when it
serializes failures.  ``ClaimViolation`` is special: it signals that a
computed identity failed, and the CLI maps it to exit status 2.
"""


class HyperpolyError(Exception):
    code = "error"


class ParseError(HyperpolyError, ValueError):
    code = "parse_error"


class NonPositiveLength(HyperpolyError, ValueError):
    code = "non_positive_length"


class TooFewEdges(HyperpolyError, ValueError):
    code = "too_few_edges"


class NonGenericAlpha(HyperpolyError, ValueError):
    code = "non_generic_alpha"

    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"alpha is not generic: balanced split with S={list(witness)}")


class DimensionMismatch(HyperpolyError, ValueError):
    code = "dimension_mismatch"


class DegreeBoundExceeded(HyperpolyError):
    code = "degree_bound_exceeded"


class EmptySubset(HyperpolyError, ValueError):
    code = "empty_subset"


class FullSubset(HyperpolyError, ValueError):
    code = "full_subset"


class NotProper(HyperpolyError, ValueError):
    code = "not_proper"


class IndexOutOfRange(HyperpolyError, ValueError):
    code = "index_out_of_range"


class RingMismatch(HyperpolyError, ValueError):
    code = "ring_mismatch"


class NotHomogeneous(HyperpolyError, ValueError):
    code = "not_homogeneous"


class NotDivisible(HyperpolyError, ValueError):
    code = "not_divisible"


class NotShort(HyperpolyError, ValueError):
    code = "not_short"


class SubsetTooSmall(HyperpolyError, ValueError):
    code = "subset_too_small"


class RequiresOneInS(HyperpolyError, ValueError):
    code = "requires_one_in_s"


class NotASurface(HyperpolyError, ValueError):
    code = "not_a_surface"


class DegenerateTopDegree(HyperpolyError):
    code = "degenerate_top_degree"


class BasisNotIndependent(HyperpolyError, ValueError):
    code = "basis_not_independent"


class ClaimViolation(HyperpolyError):
    """A computed identity did not hold.  ``witness`` locates the failure."""

    code = "claim_violation"

    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class SingularGroupElement(HyperpolyError, ValueError):
    code = "singular_group_element"


class PreconditionViolated(HyperpolyError, ValueError):
    code = "precondition_violated"

    def __init__(self, message, residuals=None):
        self.residuals = residuals or {}
        super().__init__(message)


class ConditionViolated(HyperpolyError, ValueError):
    code = "condition_violated"

    def __init__(self, condition, residual):
        self.condition = condition
        self.residual = residual
        super().__init__(f"condition ({condition}) violated, residual {residual:.3e}")


class ZeroW(HyperpolyError, ValueError):
    code = "zero_w"
