from .server import DEFAULT_PORT, TeleopServer, serve

__all__ = ["DEFAULT_PORT", "TeleopServer", "serve"]
