"""Packaged data files (frozen regression state for the disentanglement search)."""
