"""Exception hierarchy shared across the package.

Configuration problems (bad flags, malformed config, out-of-domain
parameters) and data problems (bad input files, degenerate samples) are
kept distinct so the command line layer can map them to stable exit codes.
"""


class CitationImpactError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(CitationImpactError):
    """Invalid configuration: missing columns, bad flags, bad parameters."""


class DataError(CitationImpactError):
    """Input data cannot support the requested computation."""


class EmptyDatasetError(DataError):
    """An operation produced or received a dataset with no records."""


class UnknownInstitutionError(DataError):
    """Requested institution label is not present in the dataset."""

    def __init__(self, label: str, known: list[str]):
        self.label = label
        self.known = sorted(known)
        super().__init__(
            f"unknown institution {label!r}; known institutions: {', '.join(self.known)}"
        )


class RejectThresholdError(DataError):
    """Too large a fraction of input rows was rejected during parsing."""


class DegenerateVarianceError(DataError):
    """A variance required by a test is zero."""


class DegenerateReferenceError(DataError):
    """A reference-set mean is zero or negative, so ratios are undefined."""


class CapabilityError(DataError):
    """The requested computation needs data that is not available.

    Raised e.g. when fractional top-share weights are requested but raw
    reference-set citation counts were never seen (only pre-supplied
    percentiles).
    """
