"""FastAPI service wrapping the optimization toolkit."""

from .app import create_app

__all__ = ["create_app"]
