"""Deterministic indoor-navigation simulator and room-finding robot stack.

The robot explores an unknown floor, asks a direction-giver for the way to a
numbered door, infers an executable plan from the dialogue, follows it through
hallway intersections, and confirms arrival by reading door tags.
"""

__version__ = "0.1.0"
