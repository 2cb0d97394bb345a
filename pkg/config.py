"""
Complement Sampling Lab - Configuration
Reads defaults from the environment (optionally a .env file).
"""

import os
from dotenv import load_dotenv

load_dotenv()

ARTIFACT_VERSION = "0.1.0"

DEFAULT_SEED   = int(os.getenv("COMPLEMENT_LAB_SEED", "20250101"))
LEDGER_PATH    = os.getenv("LEDGER_PATH", "/tmp/complement_lab.db")
LOG_LEVEL      = os.getenv("LOG_LEVEL", "INFO").upper()
MAX_SIM_QUBITS = int(os.getenv("MAX_SIM_QUBITS", "20"))
# Keys the per-round transcript tags; empty means "use the master seed".
REFEREE_KEY    = os.getenv("REFEREE_KEY", "")
