"""Exception types shared across the parsers and pipelines."""


class VitalcepError(Exception):
    """Base class for all library errors."""


class ParseError(VitalcepError):
    """Malformed input text.

    Carries the 1-based line number and the offending text when known.
    """

    def __init__(self, message: str, line: int | None = None, text: str | None = None):
        self.line = line
        self.text = text
        if line is not None:
            message = f"line {line}: {message}"
        if text:
            message = f"{message} (in {text!r})"
        super().__init__(message)


class UnknownPrefixError(ParseError):
    """A prefixed name used a prefix that was never declared."""

    def __init__(self, prefix: str, line: int | None = None):
        self.prefix = prefix
        super().__init__(f"unknown prefix {prefix + ':'!r}", line=line)


class UnsupportedFeatureError(ParseError):
    """Syntactically valid input outside the supported subset."""

    def __init__(self, construct: str, line: int | None = None):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}", line=line)


class SchemaError(VitalcepError):
    """Input data does not match the expected schema."""
