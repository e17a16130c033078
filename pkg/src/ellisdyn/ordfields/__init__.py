from .expr import ParseError
from .ladder import FieldMismatch, Ladder, LadderElem, RepresentationError, ladder_sign
from .subfield import (
    NoStandardPart,
    NotFinite,
    SubfieldSpec,
    approximate,
    is_finite_over,
    is_infinitesimal_over,
    standard_part,
)
from .transc import ConstOracle, TranscElem, UnknownOracle, get_oracle, transc_sign

__all__ = [
    "ConstOracle", "FieldMismatch", "Ladder", "LadderElem", "NoStandardPart", "NotFinite",
    "ParseError", "RepresentationError", "SubfieldSpec", "TranscElem", "UnknownOracle",
    "approximate", "get_oracle", "is_finite_over", "is_infinitesimal_over", "ladder_sign",
    "standard_part", "transc_sign",
]
