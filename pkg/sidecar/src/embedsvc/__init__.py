"""Embedding service for the forumqa remote-provider protocol.

Two interchangeable models behind one HTTP surface: a word-vector file
with mean pooling, and a contextual sentence encoder. The engine talks to
either through POST /embed and GET /health; nothing here imports the
engine.
"""

from .app import create_app
from .errors import ModelLoadError, SidecarError
from .sentence import SentenceModel
from .wordvec import WordVectorModel, tokenize

__all__ = [
    "ModelLoadError",
    "SentenceModel",
    "SidecarError",
    "WordVectorModel",
    "create_app",
    "tokenize",
]

__version__ = "0.1.0"
