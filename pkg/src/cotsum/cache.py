"""On-disk cache of series evaluations, one JSON file per (p, method, n_terms)."""

from __future__ import annotations

import json
from pathlib import Path

from .series import SeriesEvaluation


class SeriesCache:
    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, p: int, method: str, n_terms: int) -> Path:
        return self.root / f"{method}_p{p}_n{n_terms}.json"

    def _tol_path(self, p: int, method: str, tol: float) -> Path:
        return self.root / f"{method}_p{p}_tol{tol.hex()}.json"

    def get(self, p: int, method: str, n_terms: int) -> SeriesEvaluation | None:
        path = self._path(p, method, n_terms)
        if not path.exists():
            return None
        return SeriesEvaluation.from_dict(json.loads(path.read_text()))

    def put(self, ev: SeriesEvaluation) -> None:
        path = self._path(ev.p, ev.method, ev.n_terms)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(ev.as_dict(), sort_keys=True))
        tmp.replace(path)

    def n_for_tol(self, p: int, method: str, tol: float) -> int | None:
        path = self._tol_path(p, method, tol)
        if not path.exists():
            return None
        return json.loads(path.read_text())["n_terms"]

    def remember_tol(self, p: int, method: str, tol: float, n_terms: int) -> None:
        self._tol_path(p, method, tol).write_text(json.dumps({"n_terms": n_terms}))
