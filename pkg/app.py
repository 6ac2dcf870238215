import sys

from src.cli import main

# --- Entry point: python app.py <subcommand> [options] ---
if __name__ == "__main__":
    sys.exit(main())
