"""Decision toolkit for clustered planarity with pipes and its relatives."""

__version__ = "0.1.0"
