"""
Batch decision of sequent files.

* One sequent per line; blank lines and ``#`` lines are skipped.
* Verdicts: yes, no, limit (search limit hit), fragment (not a sequent of
  the system).
* Results go to stdout and to ``results.csv``.
* The summary goes to stdout and to ``summary.txt``.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from necklace.errors import BatchError, FragmentError, NecklaceError, SearchLimitError
from necklace.formula import Sequent, SystemId, parse_sequent, print_sequent
from necklace.search import SearchConfig, Searcher

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class BatchEntry:
    sequent: Sequent
    verdict: str
    rules: tuple[str, ...] = ()

    @property
    def derivable(self) -> bool:
        return self.verdict == "yes"


class BatchRunner:
    CSV_FILE = Path("results.csv")
    SUMMARY_FILE = Path("summary.txt")

    def __init__(self, system: SystemId, config: Optional[SearchConfig] = None, *,
                 csv_file: Optional[Path] = None, summary_file: Optional[Path] = None) -> None:
        self.system = system
        self.searcher = Searcher(config or SearchConfig.for_system(system))
        self.csv_file = Path(csv_file) if csv_file else self.CSV_FILE
        self.summary_file = Path(summary_file) if summary_file else self.SUMMARY_FILE
        self.entries: list[BatchEntry] = []

    # ------------------------------------------------------------------
    def run(self, path: Union[str, Path]) -> list[BatchEntry]:
        """Decide every sequent in ``path``; entries accumulate across calls."""
        for s in self._load_from_file(Path(path)):
            self.entries.append(self._decide(s))
            LOG.info("%s: %s", s, self.entries[-1].verdict)
        return self.entries

    def _decide(self, s: Sequent) -> BatchEntry:
        try:
            proof = self.searcher.derive(s)
        except SearchLimitError as exc:
            LOG.warning("%s: %s", s, exc)
            return BatchEntry(s, "limit")
        except FragmentError as exc:
            LOG.warning("%s: %s", s, exc)
            return BatchEntry(s, "fragment")
        if proof is None:
            return BatchEntry(s, "no")
        return BatchEntry(s, "yes", tuple(sorted(rule.value for rule in proof.rules())))

    # ------------------------------------------------------------------
    def _load_from_file(self, path: Path) -> list[Sequent]:
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise BatchError(f"Could not read {path}: {exc}") from exc
        sequents = []
        for number, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                sequents.append(parse_sequent(line))
            except NecklaceError as exc:
                raise BatchError(f"{path}:{number}: {exc}") from exc
        return sequents

    # ------------------------------------------------------------------
    def _entries_to_csv(self) -> str:
        """All entries as CSV text, header first."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["Sequent", "System", "Derivable", "Rules"])
        for entry in self.entries:
            writer.writerow([print_sequent(entry.sequent), self.system.value, entry.verdict, " ".join(entry.rules)])
        return buffer.getvalue()

    def summary(self) -> str:
        derivable = sum(1 for e in self.entries if e.derivable)
        lines = ["Summary (derivable / total):", f"{self.system.value}: {derivable} / {len(self.entries)}"]
        limited = sum(1 for e in self.entries if e.verdict == "limit")
        if limited:
            lines.append(f"search limit hit: {limited}")
        outside = sum(1 for e in self.entries if e.verdict == "fragment")
        if outside:
            lines.append(f"outside the fragment: {outside}")
        return "\n".join(lines) + "\n"

    # ------------------------------------------------------------------
    def _write(self, path: Path, text: str) -> bool:
        try:
            with open(path, "w", newline="", encoding="utf-8") as f:
                f.write(text)
        except OSError as exc:
            LOG.error("Failed to write %s: %s", path, exc)
            return False
        return True

    def save(self) -> bool:
        """Print the CSV report and write it to ``csv_file``."""
        csv_text = self._entries_to_csv()
        print(csv_text, end="", flush=True)
        return self._write(self.csv_file, csv_text)

    def save_summary(self) -> bool:
        summary_text = self.summary()
        print(summary_text, end="", flush=True)
        return self._write(self.summary_file, summary_text)
