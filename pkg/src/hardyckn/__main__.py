"""Allow `python -m hardyckn ...` as an alias for the console script."""

from .cli import entrypoint

if __name__ == "__main__":
    entrypoint()
