"""Real-time teleoperation service: websocket bridge around the engine."""

from .app import create_app
from .protocol import PROTOCOL_VERSION

__all__ = ["create_app", "PROTOCOL_VERSION"]
