"""Versioned binary model container.

Layout (all integers little-endian):

    magic "BHD1" | u32 format version | u32 metadata length | metadata JSON
    | raw float32 arrays in the order listed by the metadata | u32 CRC-32C

The checksum covers every byte before it.  Arrays are float32
little-endian; learner alphas are float64 and ride in the JSON metadata
via shortest-repr floats, which round-trip exactly.  Writes go to a
temporary file renamed into place so failures never leave partial output.
"""

import json
import os
import struct
import tempfile

import numpy as np

from .boost import BoostHDModel
from .encoder import EncoderParams
from .errors import ChecksumMismatch, FormatVersionMismatch, IoFailure
from .onlinehd import OnlineHDModel

MAGIC = b"BHD1"
FORMAT_VERSION = 1

_CRC32C_POLY = 0x82F63B78


def _make_crc32c_table():
    table = []
    for i in range(256):
        crc = i
        for _ in range(8):
            crc = (crc >> 1) ^ _CRC32C_POLY if crc & 1 else crc >> 1
        table.append(crc)
    return table


_CRC_TABLE = _make_crc32c_table()


def crc32c(data, crc=0):
    """CRC-32C (Castagnoli) of a bytes-like object."""
    crc = crc ^ 0xFFFFFFFF
    for byte in data:
        crc = _CRC_TABLE[(crc ^ byte) & 0xFF] ^ (crc >> 8)
    return crc ^ 0xFFFFFFFF


def _encoder_meta(params):
    return {
        "in_features": params.in_features,
        "out_dim": params.out_dim,
        "seed": params.seed,
        "activation": params.activation,
    }


def _encoder_arrays(params):
    return [params.basis, params.phases]


def _pack(meta, arrays):
    meta_bytes = json.dumps(meta, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(meta_bytes)), meta_bytes]
    for arr in arrays:
        parts.append(np.ascontiguousarray(arr, dtype="<f4").tobytes())
    body = b"".join(parts)
    return body + struct.pack("<I", crc32c(body))


def save_model(model, path):
    """Serialize a BoostHDModel or standalone OnlineHDModel."""
    if isinstance(model, BoostHDModel):
        meta = {
            "kind": "boost",
            "n_classes": model.n_classes,
            "d_total": model.d_total,
            "n_learners": model.n_learners,
            "partition": [list(s) for s in model.partition],
            "alphas": [float(a) for a in model.alphas],
            "lr": model.learners[0].lr if model.learners else None,
            "encoder": _encoder_meta(model.encoder),
            "diagnostics": model.diagnostics,
            "arrays": ["basis", "phases"]
            + [f"learner_{i}" for i in range(model.n_learners)],
        }
        arrays = _encoder_arrays(model.encoder) + [m.class_hvs for m in model.learners]
    elif isinstance(model, OnlineHDModel):
        if model.encoder is None:
            raise ValueError("standalone OnlineHDModel needs an encoder to serialize")
        meta = {
            "kind": "online",
            "n_classes": model.n_classes,
            "dim": model.dim,
            "lr": model.lr,
            "encoder": _encoder_meta(model.encoder),
            "arrays": ["basis", "phases", "class_hvs"],
        }
        arrays = _encoder_arrays(model.encoder) + [model.class_hvs]
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")

    blob = _pack(meta, arrays)
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".bhd-tmp-")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(blob)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise IoFailure(f"cannot write model file {path}: {exc}") from exc


def _read_array(buf, offset, shape):
    count = int(np.prod(shape))
    nbytes = count * 4
    arr = np.frombuffer(buf, dtype="<f4", count=count, offset=offset).reshape(shape)
    return arr.copy(), offset + nbytes


def load_model(path):
    """Load a model file, verifying magic, version and checksum."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read model file {path}: {exc}") from exc
    if len(blob) < len(MAGIC) + 12 or blob[:4] != MAGIC:
        raise FormatVersionMismatch(f"{path} is not a BHD1 model file")
    body, (stored,) = blob[:-4], struct.unpack("<I", blob[-4:])
    if crc32c(body) != stored:
        raise ChecksumMismatch(f"{path} failed checksum verification")
    version, meta_len = struct.unpack("<II", blob[4:12])
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"{path} has format version {version}, expected {FORMAT_VERSION}"
        )
    meta = json.loads(blob[12:12 + meta_len].decode("utf-8"))
    offset = 12 + meta_len

    enc = meta["encoder"]
    basis, offset = _read_array(blob, offset, (enc["in_features"], enc["out_dim"]))
    phases, offset = _read_array(blob, offset, (enc["out_dim"],))
    params = EncoderParams(
        basis=basis,
        phases=phases,
        in_features=enc["in_features"],
        out_dim=enc["out_dim"],
        seed=enc["seed"],
        activation=enc["activation"],
    )

    if meta["kind"] == "online":
        class_hvs, offset = _read_array(blob, offset, (meta["n_classes"], meta["dim"]))
        return OnlineHDModel(
            class_hvs=class_hvs,
            lr=meta["lr"],
            n_classes=meta["n_classes"],
            dim=meta["dim"],
            encoder=params,
        )

    learners = []
    for _, width in meta["partition"]:
        class_hvs, offset = _read_array(blob, offset, (meta["n_classes"], width))
        learners.append(
            OnlineHDModel(
                class_hvs=class_hvs,
                lr=meta["lr"],
                n_classes=meta["n_classes"],
                dim=width,
            )
        )
    return BoostHDModel(
        learners=learners,
        alphas=np.array(meta["alphas"], dtype=np.float64),
        partition=[tuple(s) for s in meta["partition"]],
        n_classes=meta["n_classes"],
        d_total=meta["d_total"],
        encoder=params,
        diagnostics=meta.get("diagnostics", []),
    )
