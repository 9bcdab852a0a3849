"""Numerical laboratory for Bergman metrics on explicit polarized models.

Attributes
----------
__version__ : str
    Tool version, echoed into every JSON report and ledger row
"""

__version__ = "1.0.0"
