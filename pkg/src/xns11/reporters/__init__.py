"""Reporter plugins: auto-registers all built-in reporters on import."""

from xns11.reporters.console import ConsoleReporter
from xns11.reporters.json_reporter import JSONReporter
from xns11.reporters.registry import register_reporter

register_reporter("console", ConsoleReporter)
register_reporter("json", JSONReporter)
