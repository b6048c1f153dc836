"""Modular units of level 11 and modular symbols for the newforms of level 121."""
