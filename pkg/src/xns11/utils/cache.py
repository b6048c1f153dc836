"""On-disk cache of newform coefficient tables."""

from __future__ import annotations

import logging
import os
import tempfile
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

CACHE_VERSION = "v1"


class AnCache:
    """Tables a_1..a_nmax stored as ``<cache_dir>/v1/an_<label>.tsv``."""

    def __init__(self, cache_dir: str | Path):
        self.root = Path(cache_dir).expanduser() / CACHE_VERSION

    def path_for(self, label: str) -> Path:
        return self.root / f"an_{label}.tsv"

    def load(self, label: str, nmax: int) -> np.ndarray | None:
        """Coefficients indexed 0..nmax (index 0 unused), or None when not usable."""
        path = self.path_for(label)
        if not path.exists():
            return None
        try:
            with open(path) as f:
                header = f.readline().split()
                fields = dict(item.split("=", 1) for item in header[4:])
                if header[:4] != ["#", "xns11", "an-table", CACHE_VERSION]:
                    raise ValueError(f"unexpected header {' '.join(header)!r}")
                if fields.get("label") != label:
                    raise ValueError(f"label mismatch {fields.get('label')!r}")
                stored = int(fields["nmax"])
                if stored < nmax:
                    logger.info("Cached %s stops at nmax=%d < %d; recomputing", label, stored, nmax)
                    return None
                values = np.zeros(stored + 1, dtype=np.int64)
                expected = 0
                for line in f:
                    expected += 1
                    n, a = (int(v) for v in line.split("\t"))
                    if n != expected:
                        raise ValueError(f"line for n={n} where n={expected} was expected")
                    values[n] = a
                if expected != stored:
                    raise ValueError(f"{expected} rows for nmax={stored}")
        except (ValueError, KeyError, IndexError) as e:
            logger.warning("Ignoring malformed cache file %s: %s", path, e)
            return None
        logger.debug("Loaded %s from cache (nmax=%d)", label, stored)
        return values[: nmax + 1]

    def store(self, label: str, values: np.ndarray) -> Path:
        nmax = len(values) - 1
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path_for(label)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=f".an_{label}.", suffix=".tmp")
        with os.fdopen(fd, "w") as f:
            f.write(f"# xns11 an-table {CACHE_VERSION} label={label} nmax={nmax}\n")
            for n in range(1, nmax + 1):
                f.write(f"{n}\t{int(values[n])}\n")
        os.replace(tmp, path)
        logger.info("Coefficient table %s (nmax=%d) written to %s", label, nmax, path)
        return path
