"""Exception types shared across the package."""


class CorpusError(Exception):
    """Fatal corpus problem: empty input, duplicate document id, bad schema."""


class RuleError(Exception):
    """A cleaning rule failed to parse or compile."""


class ConsistencyError(Exception):
    """Cross-module bookkeeping disagrees (counts, marginals, numerics)."""
