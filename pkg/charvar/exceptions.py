"""Exceptions raised by charvar."""

from __future__ import annotations

from typing import Any


class CharvarError(Exception):
    """Exception to indicate a general charvar error."""

    translation_key = "unknown"

    def __init__(self, message: str, **placeholders: Any) -> None:
        """Initialize the error with a message and translation placeholders."""
        super().__init__(message)
        self.translation_placeholders: dict[str, Any] = {
            "detail": message,
            **placeholders,
        }


class ConfigError(CharvarError):
    """Exception to indicate an invalid config or input file."""

    translation_key = "config"


class InvalidParameter(CharvarError):
    """Exception to indicate a parameter outside its documented range."""

    translation_key = "invalid_parameter"


class PresentationSyntaxError(CharvarError):
    """Exception to indicate malformed presentation text."""

    translation_key = "syntax"

    def __init__(self, message: str, line: int, column: int) -> None:
        """Initialize with the source position of the offending token."""
        super().__init__(
            f"{message} (line {line}, column {column})", line=line, column=column
        )
        self.line = line
        self.column = column


class UnknownGenerator(PresentationSyntaxError):
    """Exception to indicate a relator that uses an undeclared generator."""

    translation_key = "unknown_generator"

    def __init__(self, name: str, line: int, column: int) -> None:
        """Initialize with the undeclared name."""
        super().__init__(f"Unknown generator '{name}'", line, column)
        self.name = name
        self.translation_placeholders["name"] = name


class ClassMismatch(CharvarError):
    """Exception to indicate a group class tag that contradicts the presentation."""

    translation_key = "class_mismatch"


class DescriptorInvalid(CharvarError):
    """Exception to indicate a reductive group descriptor that fails validation."""

    translation_key = "descriptor_invalid"


class HypothesisNotMet(CharvarError):
    """Exception to indicate a theorem whose hypotheses fail for the input."""

    translation_key = "hypothesis_not_met"

    def __init__(self, message: str, citation: str) -> None:
        """Initialize with the key of the citation explaining the refusal."""
        super().__init__(message, citation=citation)
        self.citation = citation


class ShapeMismatch(CharvarError):
    """Exception to indicate matrices that do not fit the presentation."""

    translation_key = "shape_mismatch"


class NotExponentCanceling(CharvarError):
    """Exception to indicate a presentation with a relator of nonzero exponent sum."""

    translation_key = "not_exponent_canceling"


class NotARepresentation(CharvarError):
    """Exception to indicate matrices that violate a relator beyond tolerance."""

    translation_key = "not_a_representation"


class NotAHomomorphism(CharvarError):
    """Exception to indicate a deck assignment that does not respect the relators."""

    translation_key = "not_a_homomorphism"


class AmbiguousClass(CharvarError):
    """Exception to indicate an obstruction product between roots of unity."""

    translation_key = "ambiguous_class"


class NotCommuting(CharvarError):
    """Exception to indicate matrices whose commutator exceeds tolerance."""

    translation_key = "not_commuting"


class IllConditioned(NotCommuting):
    """Exception to indicate a joint eigenbasis that could not be resolved."""

    translation_key = "ill_conditioned"


class NotUnitary(CharvarError):
    """Exception to indicate a matrix that is not unitary within tolerance."""

    translation_key = "not_unitary"


class NotDetOne(CharvarError):
    """Exception to indicate a matrix whose determinant is not 1 within tolerance."""

    translation_key = "not_det_one"
