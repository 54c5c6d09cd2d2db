"""Weight initialization and the DEMW binary weight file.

File layout: magic "DEMW", format version u32, tensor count u32, then per
tensor a u16 name length + UTF-8 name, u8 rank, u32 dims, and raw little-
endian float32 data. Loading validates the tensor table against the
network spec's slot enumeration and is bit-exact with saving.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import DataError, ShapeMismatchError
from .netspec import CriticSpec, NetworkSpec, enumerate_weight_slots

MAGIC = b"DEMW"
VERSION = 1


class WeightStore:
    """Ordered named float32 tensors matching a spec's parameter slots."""

    def __init__(self, tensors: dict[str, np.ndarray]):
        self.tensors = {name: np.ascontiguousarray(t, dtype=np.float32) for name, t in tensors.items()}

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.tensors[name]
        except KeyError:
            raise DataError(f"weight store has no tensor {name!r}") from None

    def __len__(self) -> int:
        return len(self.tensors)

    def names(self) -> list[str]:
        return list(self.tensors)

    def equal(self, other: "WeightStore") -> bool:
        """Bitwise equality of names, order, shapes, and data."""
        if self.names() != other.names():
            return False
        return all(
            a.shape == b.shape and np.array_equal(a.view(np.uint32), b.view(np.uint32))
            for a, b in ((self.tensors[n], other.tensors[n]) for n in self.tensors)
        )

    def copy(self) -> "WeightStore":
        return WeightStore({n: t.copy() for n, t in self.tensors.items()})


def _slots_of(spec) -> list[tuple[str, tuple[int, ...]]]:
    if isinstance(spec, (NetworkSpec, CriticSpec)):
        return enumerate_weight_slots(spec)
    return [(name, tuple(shape)) for name, shape in spec]


def init_weights(spec, seed: int) -> WeightStore:
    """Seeded He-normal kernels, zero biases, in slot order."""
    rng = np.random.default_rng(seed)
    tensors: dict[str, np.ndarray] = {}
    for name, shape in _slots_of(spec):
        if name.endswith(".b"):
            tensors[name] = np.zeros(shape, dtype=np.float32)
        else:
            fan_in = int(np.prod(shape[1:]))
            std = np.sqrt(2.0 / fan_in)
            tensors[name] = (rng.standard_normal(shape) * std).astype(np.float32)
    return WeightStore(tensors)


def zero_weights(spec) -> WeightStore:
    return WeightStore({name: np.zeros(shape, dtype=np.float32) for name, shape in _slots_of(spec)})


def save_weights(store: WeightStore) -> bytes:
    out = bytearray()
    out += MAGIC
    out += struct.pack("<II", VERSION, len(store))
    for name, tensor in store.tensors.items():
        encoded = name.encode("utf-8")
        out += struct.pack("<H", len(encoded))
        out += encoded
        out += struct.pack("<B", tensor.ndim)
        out += struct.pack(f"<{tensor.ndim}I", *tensor.shape)
        out += tensor.astype("<f4").tobytes()
    return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise DataError(f"truncated weight stream at byte {self.pos}")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))


def load_weights(data: bytes, spec) -> WeightStore:
    """Parse a DEMW stream and check it against the spec's slots exactly."""
    reader = _Reader(data)
    if reader.take(4) != MAGIC:
        raise DataError("bad magic: not a DEMW weight file")
    version, count = reader.unpack("<II")
    if version != VERSION:
        raise DataError(f"unsupported weight format version {version}")
    expected = _slots_of(spec)
    if count != len(expected):
        raise ShapeMismatchError(f"weight file has {count} tensors, spec expects {len(expected)}")
    tensors: dict[str, np.ndarray] = {}
    for exp_name, exp_shape in expected:
        (name_len,) = reader.unpack("<H")
        name = reader.take(name_len).decode("utf-8")
        (rank,) = reader.unpack("<B")
        shape = reader.unpack(f"<{rank}I") if rank else ()
        if name != exp_name:
            raise ShapeMismatchError(f"tensor {name!r} out of order, expected {exp_name!r}")
        if tuple(shape) != tuple(exp_shape):
            raise ShapeMismatchError(f"tensor {name!r} has shape {shape}, spec expects {exp_shape}")
        n_vals = int(np.prod(shape)) if shape else 1
        raw = reader.take(4 * n_vals)
        tensors[name] = np.frombuffer(raw, dtype="<f4").reshape(shape).astype(np.float32)
    if reader.pos != len(reader.data):
        raise DataError(f"{len(reader.data) - reader.pos} trailing bytes after weight table")
    return WeightStore(tensors)


def load_weights_file(path, spec) -> WeightStore:
    with open(path, "rb") as fh:
        return load_weights(fh.read(), spec)


def save_weights_file(path, store: WeightStore) -> None:
    with open(path, "wb") as fh:
        fh.write(save_weights(store))
