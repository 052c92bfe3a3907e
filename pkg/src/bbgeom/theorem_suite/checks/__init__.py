"""Importing this package fills the registry."""
from . import baer, circle, conics, frame, nrc, pencils, ruled, subconics  # noqa: F401
