"""File formats: signals, masks, manifests, ensembles, run records.

Canonical signal container (extension .csig):

    bytes 0..7   magic "CSIGNAL1"
    bytes 8..11  header length L, unsigned 32-bit little-endian
    bytes 12..   L bytes of UTF-8 JSON:
                 {"dtype": "c64"|"c128", "shape": [...],
                  "order": "row-major", "endian": "little"}
    then         raw interleaved (re, im) little-endian floats,
                 4-byte for c64, 8-byte for c128

Mask files are UTF-8 JSON {"p": int, "dims": [...] | null,
"indices": [...]} with indices sorted ascending.

Everything written here is byte-deterministic: JSON is emitted with
sorted keys and fixed separators, and no timestamps are recorded, so
re-running a command on identical inputs reproduces identical files.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

from .errors import CsmaskError, FileFormatError
from .patterns import SubsamplingPattern

SIGNAL_MAGIC = b"CSIGNAL1"
_DTYPES = {"c64": np.dtype("<c8"), "c128": np.dtype("<c16")}


def _dump_json(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode()


def write_signal(path, arr) -> None:
    """Write an array as a .csig file; non-complex64 input becomes c128."""
    arr = np.asarray(arr)
    if arr.dtype == np.complex64:
        code, data = "c64", arr.astype(_DTYPES["c64"])
    else:
        code, data = "c128", arr.astype(_DTYPES["c128"])
    header = _dump_json(
        {
            "dtype": code,
            "shape": list(arr.shape),
            "order": "row-major",
            "endian": "little",
        }
    )
    with open(path, "wb") as fh:
        fh.write(SIGNAL_MAGIC)
        fh.write(struct.pack("<I", len(header)))
        fh.write(header)
        fh.write(np.ascontiguousarray(data).tobytes())


def read_signal(path) -> np.ndarray:
    """Read a .csig file back into a complex array."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[:8] != SIGNAL_MAGIC:
        raise FileFormatError(f"{path}: bad magic at offset 0, not a signal file")
    if len(raw) < 12:
        raise FileFormatError(f"{path}: truncated before header length at offset 8")
    (header_len,) = struct.unpack("<I", raw[8:12])
    if len(raw) < 12 + header_len:
        raise FileFormatError(f"{path}: truncated header at offset 12")
    try:
        header = json.loads(raw[12 : 12 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: unparseable header at offset 12: {exc}")
    dtype = _DTYPES.get(header.get("dtype"))
    shape = header.get("shape")
    if dtype is None or not isinstance(shape, list):
        raise FileFormatError(f"{path}: header missing valid dtype/shape")
    if header.get("order") != "row-major" or header.get("endian") != "little":
        raise FileFormatError(f"{path}: unsupported order/endian in header")
    shape = tuple(int(v) for v in shape)
    count = int(np.prod(shape)) if shape else 1
    offset = 12 + header_len
    expected = count * dtype.itemsize
    if len(raw) - offset != expected:
        raise FileFormatError(
            f"{path}: payload at offset {offset} has {len(raw) - offset} bytes,"
            f" expected {expected}"
        )
    flat = np.frombuffer(raw, dtype=dtype, count=count, offset=offset)
    return flat.reshape(shape).astype(
        np.complex64 if header["dtype"] == "c64" else np.complex128
    )


def write_mask(path, pattern: SubsamplingPattern) -> None:
    doc = {
        "p": pattern.p,
        "dims": list(pattern.dims) if pattern.dims else None,
        "indices": list(pattern.indices),
    }
    Path(path).write_bytes(_dump_json(doc))


def read_mask(path) -> SubsamplingPattern:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
        dims = doc.get("dims")
        return SubsamplingPattern(
            int(doc["p"]),
            tuple(int(i) for i in doc["indices"]),
            tuple(int(v) for v in dims) if dims else None,
        )
    except (KeyError, TypeError, ValueError, json.JSONDecodeError, CsmaskError) as exc:
        raise FileFormatError(f"{path}: not a valid mask file: {exc}")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def write_manifest(path, role, transform_kind, shape, entries) -> None:
    """entries: iterable of {"file", "patient", "z", "sha256"} dicts."""
    doc = {
        "format": "csmask-manifest/1",
        "role": role,
        "transform": {"kind": transform_kind, "shape": list(shape)},
        "slices": sorted(entries, key=lambda e: (e["patient"], e["z"])),
    }
    Path(path).write_bytes(_dump_json(doc))


def read_manifest(path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{path}: unparseable manifest: {exc}")
    if doc.get("format") != "csmask-manifest/1":
        raise FileFormatError(f"{path}: not a csmask manifest")
    for key in ("role", "transform", "slices"):
        if key not in doc:
            raise FileFormatError(f"{path}: manifest missing {key!r}")
    return doc


def load_manifest_signals(path):
    """Read every slice a manifest lists.

    Returns (transform_dict, signals, labels) with file paths resolved
    relative to the manifest's directory.
    """
    path = Path(path)
    doc = read_manifest(path)
    signals = []
    labels = []
    for entry in doc["slices"]:
        signals.append(read_signal(path.parent / entry["file"]))
        labels.append(f"{entry['patient']}/z{int(entry['z']):03d}")
    return doc["transform"], signals, labels


def write_ensemble(directory, ens) -> Path:
    """Store an ensemble as atom .csig files plus a probabilities sidecar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    names = []
    for k, atom in enumerate(ens.atoms):
        name = f"atom_{k:04d}.csig"
        write_signal(directory / name, atom)
        names.append(name)
    sidecar = {
        "format": "csmask-ensemble/1",
        "atoms": names,
        "probs": [float(v) for v in ens.probs],
        "seed": ens.seed,
    }
    out = directory / "ensemble.json"
    out.write_bytes(_dump_json(sidecar))
    return out


def read_ensemble(sidecar_path):
    from .synthetic import DiscreteEnsemble

    sidecar_path = Path(sidecar_path)
    try:
        doc = json.loads(sidecar_path.read_text("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise FileFormatError(f"{sidecar_path}: unparseable sidecar: {exc}")
    if doc.get("format") != "csmask-ensemble/1":
        raise FileFormatError(f"{sidecar_path}: not an ensemble sidecar")
    atoms = tuple(
        read_signal(sidecar_path.parent / name) for name in doc.get("atoms", [])
    )
    return DiscreteEnsemble(atoms, np.asarray(doc["probs"]), doc.get("seed"))


def _read_csig_volume(path) -> np.ndarray:
    return read_signal(path)


def _read_npy_volume(path) -> np.ndarray:
    try:
        return np.asarray(np.load(path), dtype=np.complex128)
    except ValueError as exc:
        raise FileFormatError(f"{path}: not a loadable .npy array: {exc}")


# Reader interface for raw volumes: maps a file suffix to a loader
# returning a complex 3D (x, y, z) array. Converters for third-party
# containers can register here without touching the ingestion code.
VOLUME_READERS = {
    ".csig": _read_csig_volume,
    ".npy": _read_npy_volume,
}


def read_volume(path) -> np.ndarray:
    path = Path(path)
    reader = VOLUME_READERS.get(path.suffix.lower())
    if reader is None:
        supported = ", ".join(sorted(VOLUME_READERS))
        raise FileFormatError(f"{path}: unknown volume format (supported: {supported})")
    return reader(path)


def write_run_record(path, command: str, config: dict, inputs: dict, outputs) -> None:
    """Machine-readable record of one CLI run (no timestamps, see module doc).

    Output paths are stored relative to the record itself so records do
    not depend on where the output directory happens to live.
    """
    path = Path(path)

    def _rel(o) -> str:
        o = Path(o)
        try:
            return o.relative_to(path.parent).as_posix()
        except ValueError:
            return str(o)

    doc = {
        "command": command,
        "config": config,
        "inputs": inputs,
        "outputs": sorted(_rel(o) for o in outputs),
    }
    path.write_bytes(_dump_json(doc))
