"""Exception types. Every error carries a short machine-readable ``code``."""


class WickError(Exception):
    code = "wick_error"

    def __init__(self, message, **context):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self):
        return {"code": self.code, "message": self.message, "context": self.context}


class DimensionMismatch(WickError):
    code = "dimension_mismatch"


class IndexOutOfRange(WickError):
    code = "index_out_of_range"


class NonInvertible(WickError):
    code = "non_invertible"


class ZeroExpansion(WickError):
    code = "zero_expansion"


class DegreeOverflow(WickError):
    code = "degree_overflow"


class QuadratureError(WickError):
    code = "quadrature_error"


class SchemaError(WickError):
    code = "schema_error"


class ConsistencyError(WickError):
    """Two routes that must agree did not."""

    code = "consistency_error"
