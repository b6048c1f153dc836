"""JSON file reporter."""

from __future__ import annotations

import json
import logging
from pathlib import Path

from xns11.core.models import RunSummary
from xns11.core.reporter import Reporter

logger = logging.getLogger(__name__)


class JSONReporter(Reporter):
    """Reporter that writes the deterministic part of a run to a JSON file.

    ``output`` is either a file path ending in ``.json`` or a directory; a
    directory gets ``<run_id>/results.json``.
    """

    @property
    def name(self) -> str:
        return "json"

    def report(self, summary: RunSummary, output: str | None = None) -> None:
        results_file = self.path_for(summary, output)
        results_file.parent.mkdir(parents=True, exist_ok=True)

        with open(results_file, "w") as f:
            json.dump(summary.to_dict(timing=False), f, indent=2, sort_keys=True)
            f.write("\n")

        logger.info("Results written to %s", results_file)

    @staticmethod
    def path_for(summary: RunSummary, output: str | None) -> Path:
        if output is None:
            output = "results"
        path = Path(output)
        if path.suffix == ".json":
            return path
        return path / summary.run_id / "results.json"
