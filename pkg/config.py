import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Randomized property sweeps
DEFAULT_SEED = int(os.getenv("CHAR2_SEED", "20240601"))
RANDOM_SAMPLES = int(os.getenv("CHAR2_RANDOM_SAMPLES", "200"))
# Threads for sharded enumeration and concurrent suites; they share the GIL, so this buys no speed-up
WORKERS = int(os.getenv("CHAR2_WORKERS", "1"))

# Logging
LOG_LEVEL = os.getenv("CHAR2_LOG_LEVEL", "WARNING").upper()

# Enumeration bounds
# k * dim for brute-force isotropic counts, n for GL(n, F2) enumeration
ENUMERATION_BOUND = int(os.getenv("CHAR2_ENUMERATION_BOUND", "24"))
GROUP_DIM_BOUND = int(os.getenv("CHAR2_GROUP_DIM_BOUND", "4"))

# Shipped form files
FORMS_DIR = os.getenv("CHAR2_FORMS_DIR", "data/forms")


def get_verifier_config():
    """
    Get a dictionary of all verifier configuration.

    Returns:
        Dictionary with all verifier settings
    """
    return {
        "seed": DEFAULT_SEED,
        "random_samples": RANDOM_SAMPLES,
        "workers": WORKERS if WORKERS > 0 else 1,
        "log_level": LOG_LEVEL,
        "enumeration_bound": ENUMERATION_BOUND,
        "group_dim_bound": GROUP_DIM_BOUND,
        "forms_dir": FORMS_DIR,
    }
