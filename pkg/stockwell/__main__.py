"""
Main module of the directional Stockwell toolkit, ``python -m stockwell``.
"""

from stockwell.config.config import settings
from stockwell.router import router


def main() -> None:
    router(prog_name=settings.NAME)


if __name__ == "__main__":
    main()
