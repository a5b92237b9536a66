"""Exception types shared across the toolkit."""


class MixsdError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(MixsdError):
    """Invalid configuration (bad flag value, malformed config file, ...)."""


class DomainError(MixsdError):
    """Input outside an operation's declared domain."""


class NameSpaceExhausted(MixsdError):
    """Could not mint a fresh entity name within the attempt budget."""


class ExhaustedError(MixsdError):
    """Could not sample enough distinct operation compositions."""


class TemplateError(MixsdError):
    """A template string is missing a required placeholder."""


class EncodingError(MixsdError):
    """Text contains characters outside the backend's vocabulary."""


class ContextOverflow(MixsdError):
    """Context plus prefix would exceed the backend's sequence limit."""


class BackendError(MixsdError):
    """A conditional-model backend failed to serve a request."""


class RemoteError(BackendError):
    """Transport or protocol failure talking to a remote backend."""

    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


class VectorFormatError(MixsdError):
    """Malformed binary vector file."""


class LengthMismatch(MixsdError):
    """Vector lengths disagree with the declared dimension."""


class EmptyStream(MixsdError):
    """A reduction received no input vectors."""


class EmptyProfile(MixsdError):
    """An NLL profile with zero tokens cannot be summarized."""


class DegenerateInput(MixsdError):
    """Statistic undefined for this input (e.g. zero variance)."""
