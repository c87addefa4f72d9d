"""Crowd-aware itinerary simulation for theme parks."""

__version__ = "0.1.0"
