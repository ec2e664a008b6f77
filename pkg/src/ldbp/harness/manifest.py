"""Dataset manifests: ``path,label,subject`` CSV files, one row per sequence."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from pathlib import Path

from ..classify import LABELS

__all__ = ["ManifestError", "ManifestEntry", "load_manifest", "write_manifest", "ckplus_entries",
           "canonical_label"]

HEADER = ("path", "label", "subject")

_ALIASES = {"happy": "Happiness", "angry": "Anger"}
_CKPLUS_CODES = {1: "Anger", 2: "Contempt", 3: "Disgust", 4: "Fear",
                 5: "Happiness", 6: "Sadness", 7: "Surprise"}


class ManifestError(ValueError):
    def __init__(self, path, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ManifestEntry:
    path: Path
    label: str
    subject: str


def canonical_label(name: str) -> str | None:
    """Canonical class name for ``name`` (case-insensitive; 'Happy'/'Angry' accepted)."""
    key = name.strip().lower()
    for lab in LABELS:
        if lab.lower() == key:
            return lab
    return _ALIASES.get(key)


def load_manifest(path, check_paths: bool = True) -> list[ManifestEntry]:
    """Read a manifest. Relative sequence paths resolve against the manifest's directory.

    Label and subject never contain commas, so each row is split at its last
    two commas and the path may contain commas unquoted.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"manifest not found: {path}")
    lines = path.read_text(encoding="utf-8-sig").splitlines()
    if not lines or tuple(c.strip().lower() for c in lines[0].split(",")) != HEADER:
        raise ManifestError(path, 1, f"expected header {','.join(HEADER)!r}")
    entries: list[ManifestEntry] = []
    seen: dict[Path, int] = {}
    for lineno, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        fields = raw.rsplit(",", 2)
        if len(fields) != 3 or not all(f.strip() for f in fields):
            raise ManifestError(path, lineno, f"malformed row {raw!r}; expected path,label,subject")
        seq, label, subject = (f.strip() for f in fields)
        canon = canonical_label(label)
        if canon is None:
            raise ManifestError(path, lineno, f"unknown label {label!r}; expected one of {', '.join(LABELS)}")
        seq_path = Path(seq)
        if not seq_path.is_absolute():
            seq_path = path.parent / seq_path
        key = seq_path.resolve()
        if key in seen:
            raise ManifestError(path, lineno, f"duplicate sequence path {seq!r} (first on line {seen[key]})")
        seen[key] = lineno
        if check_paths and not seq_path.is_dir():
            raise ManifestError(path, lineno, f"sequence directory {seq!r} does not exist")
        entries.append(ManifestEntry(seq_path, canon, subject))
    if not entries:
        warnings.warn(f"manifest {path} has no data rows", stacklevel=2)
    return entries


def write_manifest(path, entries, relative_to=None) -> Path:
    """Write entries as CSV; paths are made relative to ``relative_to`` (default: the file's directory)."""
    path = Path(path)
    base = Path(relative_to) if relative_to is not None else path.parent
    rows = [",".join(HEADER)]
    for e in entries:
        p = Path(e.path)
        try:
            p = p.resolve().relative_to(base.resolve())
        except ValueError:
            pass
        rows.append(f"{p.as_posix()},{e.label},{e.subject}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path


def ckplus_entries(images_root, emotion_root) -> list[ManifestEntry]:
    """Manifest entries for a CK+ style tree.

    Sequences live in ``images_root/S###/###/`` and are labelled by the
    ``S###_###_########_emotion.txt`` file under ``emotion_root/S###/###/``.
    Sequences with no emotion file are skipped.
    """
    images_root, emotion_root = Path(images_root), Path(emotion_root)
    entries = []
    for subject_dir in sorted(p for p in images_root.iterdir() if p.is_dir()):
        if not re.fullmatch(r"S\d+", subject_dir.name):
            continue
        for seq_dir in sorted(p for p in subject_dir.iterdir() if p.is_dir()):
            labels = sorted((emotion_root / subject_dir.name / seq_dir.name).glob("*_emotion.txt"))
            if not labels:
                continue
            code = int(round(float(labels[0].read_text().split()[0])))
            if code not in _CKPLUS_CODES:
                raise ValueError(f"{labels[0]}: emotion code {code} outside 1..7")
            entries.append(ManifestEntry(seq_dir, _CKPLUS_CODES[code], subject_dir.name))
    return entries
