"""Executable semantics for the pi-calculus and CCS with a communication function."""
