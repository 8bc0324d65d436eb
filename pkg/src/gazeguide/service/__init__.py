from .app import create_app
from .sessions import SessionEngine, SessionManager

__all__ = ["create_app", "SessionEngine", "SessionManager"]
