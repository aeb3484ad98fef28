"""Suite registry, configuration and reports."""

from .config import SuiteConfig, load_config, parse_config
from .report import Report, emit
from .suites import SUITES, run_suite

__all__ = ["SUITES", "Report", "SuiteConfig", "emit", "load_config", "parse_config", "run_suite"]
