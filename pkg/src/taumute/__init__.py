"""Exact-arithmetic workbench for support tau-tilting theory."""
