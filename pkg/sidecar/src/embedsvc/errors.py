class SidecarError(Exception):
    """Base for everything this service raises on purpose."""


class ModelLoadError(SidecarError):
    """The configured model cannot be loaded; the server must not start."""
