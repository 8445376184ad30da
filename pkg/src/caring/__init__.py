"""Caring edge colorings of complete graphs, Kirkman systems, multi-round
rainbow colorings and OR-capacity lower bounds."""

__version__ = "0.1.0"
