"""Allow ``python -m flipbet``."""

from .cli import entrypoint

if __name__ == "__main__":
    entrypoint()
