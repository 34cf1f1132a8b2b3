"""Self-describing tagger model container.

Layout::

    bytes 0..8    magic  b"CYENTSM1"
    bytes 8..16   header length H, unsigned 64-bit little-endian
    bytes 16..16+H  UTF-8 JSON header
    then          the weight arrays, float64 little-endian, back to back,
                  in the order of header["sections"]

The header carries format_version, schema_version, dims, hash seeds, the
label list, training metadata, and a section table with each array's name
and shape.  Header JSON is serialized with sorted keys and no whitespace so
identical models produce identical files.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .model import TaggerModel

MAGIC = b"CYENTSM1"
FORMAT_VERSION = 1

_SECTION_ORDER = ("embed", "conv1_w", "conv1_b", "conv2_w", "conv2_b", "out_w", "out_b")


class ModelFormatError(ValueError):
    pass


def save_model(model: TaggerModel, path):
    model.check_finite()
    arrays = model.arrays()
    header = {
        "format_version": FORMAT_VERSION,
        "schema_version": model.schema_version,
        "dims": {"rows": model.rows, "dim": model.dim, "labels": len(model.label_list)},
        "hash_seeds": list(model.hash_seeds),
        "label_list": model.label_list,
        "training_meta": model.training_meta,
        "sections": [{"name": n, "shape": list(arrays[n].shape)} for n in _SECTION_ORDER],
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(blob)))
        fh.write(blob)
        for name in _SECTION_ORDER:
            fh.write(np.ascontiguousarray(arrays[name], dtype="<f8").tobytes())


def load_model(path) -> TaggerModel:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != MAGIC:
            raise ModelFormatError(f"{path}: not a cyents model file")
        (hlen,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(hlen).decode("utf-8"))
        if header.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(f"{path}: unsupported format_version")
        arrays = {}
        for section in header["sections"]:
            shape = tuple(section["shape"])
            count = int(np.prod(shape)) if shape else 1
            raw = fh.read(count * 8)
            if len(raw) != count * 8:
                raise ModelFormatError(f"{path}: truncated section {section['name']}")
            arrays[section["name"]] = np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
    model = TaggerModel(
        schema_version=header["schema_version"],
        label_list=list(header["label_list"]),
        hash_seeds=tuple(header["hash_seeds"]),
        training_meta=header.get("training_meta", {}),
        **arrays,
    )
    model.check_finite()
    return model
