"""Built-in corpus of hand-encoded presentations and loading of user files."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path

from .groups import FiniteGroup
from .pc import ConsistencyReport, PcPresentation, check_consistency, parse_presentations

SUFFIX = ".pcg"
EXAMPLE_GROUP = "ex-2187"


class CorpusError(ValueError):
    pass


@dataclass(eq=False)
class CorpusEntry:
    presentation: PcPresentation
    provenance: str
    source: str

    @property
    def name(self) -> str:
        return self.presentation.name

    @cached_property
    def group(self) -> FiniteGroup:
        return FiniteGroup.from_presentation(self.presentation)

    @cached_property
    def consistency(self) -> ConsistencyReport:
        return check_consistency(self.presentation)


def _provenance(text: str) -> str:
    lines = []
    for raw in text.splitlines():
        s = raw.strip()
        if s.startswith("group"):
            break
        if s.startswith("#"):
            lines.append(s.lstrip("#").strip())
    return "\n".join(lines).strip()


def entries_from_text(text: str, source: str) -> list[CorpusEntry]:
    prov = _provenance(text)
    return [CorpusEntry(p, prov, source) for p in parse_presentations(text)]


def load_file(path: str | Path) -> list[CorpusEntry]:
    path = Path(path)
    return entries_from_text(path.read_text(encoding="utf-8"), str(path))


def load_directory(path: str | Path) -> list[CorpusEntry]:
    """Every ``*.pcg`` file in ``path`` (not recursive), in file-name order."""
    out = []
    for f in sorted(Path(path).glob(f"*{SUFFIX}")):
        out.extend(load_file(f))
    return out


@lru_cache(maxsize=1)
def _builtin_entries() -> tuple[CorpusEntry, ...]:
    out = []
    root = resources.files("autcent") / "corpus"
    for f in sorted(root.iterdir(), key=lambda f: f.name):
        if f.name.endswith(SUFFIX):
            out.extend(entries_from_text(f.read_text(encoding="utf-8"), f"builtin:{f.name}"))
    names = [e.name for e in out]
    dupes = {n for n in names if names.count(n) > 1}
    if dupes:
        raise CorpusError(f"duplicate corpus names: {sorted(dupes)}")
    return tuple(sorted(out, key=lambda e: e.name))


def builtin_corpus(check: bool = True) -> list[CorpusEntry]:
    """The built-in corpus, sorted by name; ``check`` gates every entry on consistency."""
    entries = list(_builtin_entries())
    if check:
        bad = [e.consistency.summary() for e in entries if not e.consistency.ok]
        if bad:
            raise CorpusError("inconsistent corpus entries: " + "; ".join(bad))
    return entries


def builtin_names() -> list[str]:
    return [e.name for e in _builtin_entries()]


def get_entry(name: str) -> CorpusEntry:
    for e in _builtin_entries():
        if e.name == name:
            return e
    raise KeyError(name)
