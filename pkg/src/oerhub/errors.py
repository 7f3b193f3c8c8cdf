"""Error hierarchy shared by every module.

Each error carries a stable machine-readable code used verbatim by the
HTTP layer and the CLI.
"""


class OerHubError(Exception):
    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ValidationError(OerHubError):
    code = "validation"


class NotFoundError(OerHubError):
    code = "not_found"


class ConflictError(OerHubError):
    code = "conflict"


class AuthError(OerHubError):
    code = "auth_failed"


class PermissionDeniedError(OerHubError):
    code = "permission_denied"


class UsageError(OerHubError):
    """Caller broke an API precondition (wrong POS, bad argument combination)."""

    code = "usage"


class ParseError(OerHubError):
    """Malformed input file; carries file name and line number."""

    code = "parse_error"

    def __init__(self, filename: str, line_no: int, message: str):
        super().__init__(f"{filename}:{line_no}: {message}")
        self.filename = filename
        self.line_no = line_no


class LoadError(OerHubError):
    """Database-level failure while loading (missing files, dangling pointers)."""

    code = "load_error"
