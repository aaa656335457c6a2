"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph input: bad counts, out-of-range or duplicate edges."""


class SpecError(ValueError):
    """Malformed degree-set specification."""


class PreconditionError(ValueError):
    """An operation was called on input that violates its stated contract."""


class ResourceCapError(RuntimeError):
    """An exact operation would exceed a configured resource cap."""

    def __init__(self, cap_name: str, cap: int, required: int):
        self.cap_name = cap_name
        self.cap = cap
        self.required = required
        super().__init__(
            f"{cap_name} exceeded: need {required}, cap is {cap}"
        )


class InternalConsistencyError(RuntimeError):
    """Two routes that must agree disagreed; indicates a defect, not a finding."""
