"""Test package for the polmorph toolkit."""
