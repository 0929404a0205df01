"""Allow running as python -m conifold."""
import sys

from conifold.cli import main

if __name__ == "__main__":
    sys.exit(main())
