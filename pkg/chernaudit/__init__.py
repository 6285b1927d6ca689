"""
chernaudit - exact re-derivation of Chern character, genus and local form computations
"""

__version__ = "0.1.0"
__author__ = "chernaudit developers"

from .models import CheckRecord, Report
from .runner import VerificationRunner
from .varieties import builtin_presentations

__all__ = ["CheckRecord", "Report", "VerificationRunner", "builtin_presentations"]
