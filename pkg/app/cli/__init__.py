from app.cli.router import cli

__all__ = ["cli"]
