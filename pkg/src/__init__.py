"""
Metaconflict Partitioner - separate nonspecific evidence by event.

This package partitions a set of Dempster-Shafer evidences whose event
references are weakly specified into disjoint subsets, one per event,
by minimizing the metaconflict of the partition. The number of events
is inferred at the same time from a prior over possible counts.
"""

__version__ = "1.0.0"
__author__ = "Metaconflict Partitioner Team"
