"""
run_suite.py - Run one verification suite with the settings from the environment
"""

import sys
sys.path.append('.')  # Add root directory to path

from config import get_verifier_config
from src.verifier import VerifyOptions, run_suite

if __name__ == '__main__':
    settings = get_verifier_config()
    suite = sys.argv[1] if len(sys.argv) > 1 else 'all'
    options = VerifyOptions(seed=settings["seed"], workers=settings["workers"], samples=settings["random_samples"])
    try:
        sys.exit(run_suite(suite, options))
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        sys.exit(2)
