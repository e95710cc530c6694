"""Top-1 word-translation lexicons and their TSV serialization."""

from __future__ import annotations

from typing import Iterable, Iterator

SEED = "seed"
PROJECTED = "projected"
_PROVENANCES = (SEED, PROJECTED)


class Lexicon:
    """Source word to top-1 target word map with provenance.

    Exactly one target per source key; provenance records whether entries
    came from a curated seed list or were induced by embedding retrieval.
    """

    def __init__(self, entries: dict[str, str], provenance: str = SEED):
        if provenance not in _PROVENANCES:
            raise ValueError(f"provenance must be one of {_PROVENANCES}, got {provenance!r}")
        self.entries = dict(entries)
        self.provenance = provenance

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]], provenance: str = SEED) -> "Lexicon":
        """Collapse (source, target) pairs to top-1: first translation wins."""
        entries: dict[str, str] = {}
        for source, target in pairs:
            entries.setdefault(source, target)
        return cls(entries, provenance)

    def get(self, word: str, default=None):
        return self.entries.get(word, default)

    def items(self):
        return self.entries.items()

    def inverted(self) -> "Lexicon":
        """Target-to-source lexicon; first source wins for repeated targets."""
        return Lexicon.from_pairs(
            ((target, source) for source, target in self.entries.items()),
            provenance=self.provenance,
        )

    def __contains__(self, word) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[str]:
        return iter(self.entries)

    def save(self, path) -> None:
        """TSV 'source<TAB>target' with a '#'-prefixed provenance header."""
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(f"# provenance={self.provenance}\n")
            for source, target in self.entries.items():
                handle.write(f"{source}\t{target}\n")

    @classmethod
    def load(cls, path) -> "Lexicon":
        pairs, provenance = read_lexicon_pairs(path)
        return cls.from_pairs(pairs, provenance)


def read_lexicon_pairs(path) -> tuple[list[tuple[str, str]], str]:
    """All (source, target) pairs from a lexicon TSV, duplicates preserved.

    Use this when every listed translation should be kept (e.g. stacking
    supervision pairs); Lexicon.load collapses to top-1 instead.
    """
    pairs: list[tuple[str, str]] = []
    provenance = SEED
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                header = line.lstrip("#").strip()
                if header.startswith("provenance="):
                    value = header.split("=", 1)[1].strip()
                    if value not in _PROVENANCES:
                        raise ValueError(f"{path}:{lineno}: unknown provenance {value!r}")
                    provenance = value
                continue
            fields = line.split("\t")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise ValueError(f"{path}:{lineno}: expected 'source<TAB>target', got {line!r}")
            pairs.append((fields[0], fields[1]))
    return pairs, provenance
