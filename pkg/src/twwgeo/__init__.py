"""Twin-width and merge-width tooling for circular-arc graphs, axis-parallel
segment graphs and related obstruction families."""

__version__ = "0.1.0"
