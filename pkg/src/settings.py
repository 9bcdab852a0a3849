"""Environment configuration.

Reads a ``.env`` file (if present) once at import and exposes the handful of
process-level settings the lab honours. Numerical behaviour is driven by the
run configuration, never by the environment; the thread count only changes
scheduling.

Environment Variables
--------------------
BERGMAN_THREADS : str
    Worker-pool size for independent sweep tasks
BERGMAN_LOG_LEVEL : str
    Default log level name when no ``-v`` flag is given
BERGMAN_LEDGER_NAME : str
    Suffix of the SQLite run ledger kept beside each output directory
BERGMAN_LEDGER_PATH : str
    Single ledger file for every output directory (unset by default)

Attributes
----------
THREADS : int
    Resolved worker-pool size (at least 1)
LOG_LEVEL : str
    Resolved default log level name
LEDGER_NAME : str
    Resolved ledger suffix
LEDGER_PATH : str | None
    Resolved shared ledger file, ``None`` when unset
"""

import os

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return max(1, int(raw))
    except ValueError:
        return default


THREADS = _int_env("BERGMAN_THREADS", os.cpu_count() or 1)
LOG_LEVEL = os.getenv("BERGMAN_LOG_LEVEL", "WARNING").upper()
LEDGER_NAME = os.getenv("BERGMAN_LEDGER_NAME", "ledger.sqlite")
LEDGER_PATH = os.getenv("BERGMAN_LEDGER_PATH", "").strip() or None
