"""Example corpora shipped with the package."""
