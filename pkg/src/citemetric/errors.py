"""Exception hierarchy.

Everything raised on bad input derives from :class:`ValidationError`, which the
CLI maps to exit code 1. I/O problems surface as plain :class:`OSError`.
"""


class CitemetricError(Exception):
    """Base class for all library errors."""


class ValidationError(CitemetricError, ValueError):
    """Input data or configuration violates a documented contract."""


class MalformedRow(ValidationError):
    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class DuplicatePubId(ValidationError):
    def __init__(self, pub_id, path=None, line=None):
        self.pub_id = pub_id
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(f"{where}duplicate pub_id {pub_id!r}")


class DanglingOeuvreReference(ValidationError):
    def __init__(self, researcher_id, pub_id, path=None, line=None):
        self.researcher_id = researcher_id
        self.pub_id = pub_id
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(
            f"{where}researcher {researcher_id!r} references unknown pub_id {pub_id!r}"
        )


class CitationBeforePublication(ValidationError):
    def __init__(self, pub_id, year, pub_year, path=None, line=None):
        self.pub_id = pub_id
        self.year = year
        self.pub_year = pub_year
        where = f"{path}:{line}: " if path is not None else ""
        super().__init__(
            f"{where}citations in {year} for {pub_id!r} published in {pub_year}"
        )


class WindowBeforePublication(ValidationError):
    def __init__(self, pub_id, window_end, pub_year):
        self.pub_id = pub_id
        super().__init__(
            f"window ends {window_end} before {pub_id!r} was published ({pub_year})"
        )


class EmptyCorpus(ValidationError):
    pass


class AllPublicationsExcluded(CitemetricError):
    """No publication of an oeuvre could be scored.

    ``score`` holds the partial :class:`~citemetric.indicators.OeuvreScore`
    (indicators set to ``None``) so callers can still report the exclusions.
    """

    def __init__(self, score):
        self.score = score
        super().__init__(
            f"all {score.n_total} publications of {score.researcher_id!r} excluded"
        )


class TooFewPublications(ValidationError):
    pass


class InvalidSpec(ValidationError):
    pass


class ConfigError(ValidationError):
    pass
