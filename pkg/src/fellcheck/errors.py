"""Exception types shared across the package."""


class FellcheckError(ValueError):
    pass


class InvalidGeneratorError(FellcheckError):
    """A generator index outside 1..n (or 0) was supplied."""


class RankMismatchError(FellcheckError):
    pass


class AlgebraMismatchError(FellcheckError):
    """Operands built over different adjacency matrices."""


class DomainError(FellcheckError):
    """An operation was called outside its precondition."""


class ConstructionError(FellcheckError):
    pass


class EquivarianceError(FellcheckError):
    pass


class ConfigError(FellcheckError):
    pass


class ExpressionSyntaxError(FellcheckError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
