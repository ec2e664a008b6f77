import pytest

from ldbp.harness.manifest import (
    ManifestEntry,
    ManifestError,
    canonical_label,
    ckplus_entries,
    load_manifest,
    write_manifest,
)


def make(tmp_path, body, dirs=()):
    for d in dirs:
        (tmp_path / d).mkdir(parents=True, exist_ok=True)
    f = tmp_path / "manifest.csv"
    f.write_text(body, encoding="utf-8")
    return f


def test_single_row(tmp_path):
    f = make(tmp_path, "path,label,subject\nseq01,Happiness,S005\n", ["seq01"])
    assert load_manifest(f) == [ManifestEntry(tmp_path / "seq01", "Happiness", "S005")]


def test_unknown_label_names_line(tmp_path):
    f = make(tmp_path, "path,label,subject\nseq01,Joy,S005\n", ["seq01"])
    with pytest.raises(ManifestError, match="unknown label 'Joy'") as info:
        load_manifest(f)
    assert info.value.line == 2
    assert ":2:" in str(info.value)


def test_empty_data_warns(tmp_path):
    f = make(tmp_path, "path,label,subject\n")
    with pytest.warns(UserWarning, match="no data rows"):
        assert load_manifest(f) == []


def test_duplicate_path(tmp_path):
    f = make(tmp_path, "path,label,subject\na,Fear,S1\n./a,Fear,S2\n", ["a"])
    with pytest.raises(ManifestError, match="duplicate sequence path") as info:
        load_manifest(f)
    assert info.value.line == 3


def test_malformed_row(tmp_path):
    f = make(tmp_path, "path,label,subject\na,Fear,S1\nb,Fear\n", ["a", "b"])
    with pytest.raises(ManifestError, match="malformed row") as info:
        load_manifest(f)
    assert info.value.line == 3


def test_bad_header(tmp_path):
    with pytest.raises(ManifestError, match="header"):
        load_manifest(make(tmp_path, "file,class\n"))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_manifest(tmp_path / "none.csv")


def test_missing_sequence_dir(tmp_path):
    f = make(tmp_path, "path,label,subject\nghost,Fear,S1\n")
    with pytest.raises(ManifestError, match="does not exist"):
        load_manifest(f)
    assert len(load_manifest(f, check_paths=False)) == 1


def test_comma_in_path(tmp_path):
    f = make(tmp_path, "path,label,subject\nrun,1,Surprise,S9\n", ["run,1"])
    (entry,) = load_manifest(f)
    assert entry.path.name == "run,1" and entry.label == "Surprise"


def test_aliases_and_case(tmp_path):
    assert canonical_label("happy") == "Happiness"
    assert canonical_label("ANGRY") == "Anger"
    assert canonical_label("sadness") == "Sadness"
    assert canonical_label("Joy") is None


def test_blank_lines_and_bom(tmp_path):
    f = tmp_path / "m.csv"
    (tmp_path / "a").mkdir()
    f.write_bytes("﻿path,label,subject\n\na,Contempt,S1\n\n".encode("utf-8"))
    assert [e.label for e in load_manifest(f)] == ["Contempt"]


def test_write_round_trip(tmp_path):
    for d in ("x", "y"):
        (tmp_path / d).mkdir()
    entries = [ManifestEntry(tmp_path / "x", "Fear", "S1"), ManifestEntry(tmp_path / "y", "Disgust", "S2")]
    f = write_manifest(tmp_path / "m.csv", entries)
    assert f.read_text().splitlines()[1] == "x,Fear,S1"
    assert load_manifest(f) == entries


def test_ckplus_layout(tmp_path):
    images, emotions = tmp_path / "cohn-kanade-images", tmp_path / "Emotion"
    for subj, seq, code in (("S005", "001", "3.0000000e+00"), ("S010", "002", None), ("S010", "004", "7.0")):
        (images / subj / seq).mkdir(parents=True)
        if code:
            d = emotions / subj / seq
            d.mkdir(parents=True)
            (d / f"{subj}_{seq}_00000011_emotion.txt").write_text(f"   {code}\n")
    (images / "notes").mkdir()
    entries = ckplus_entries(images, emotions)
    assert [(e.path.name, e.label, e.subject) for e in entries] == [
        ("001", "Disgust", "S005"), ("004", "Surprise", "S010")]


def test_ckplus_bad_code(tmp_path):
    images, emotions = tmp_path / "img", tmp_path / "emo"
    (images / "S001" / "001").mkdir(parents=True)
    (emotions / "S001" / "001").mkdir(parents=True)
    (emotions / "S001" / "001" / "S001_001_1_emotion.txt").write_text("9.0")
    with pytest.raises(ValueError, match="outside 1..7"):
        ckplus_entries(images, emotions)
