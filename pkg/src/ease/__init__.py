"""Edge partitioner selection: predict partitioning quality, partitioning time and
processing time for vertex-cut partitioners, and pick the cheapest one."""

__version__ = "0.1.0"

SCHEMA_VERSION = 1
